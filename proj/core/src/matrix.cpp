#include "cpcross/matrix.hpp"

namespace cpcross {

LdlResult ldl_decompose(const Matrix<Rational>& m)
{
    if (m.rows() != m.cols()) throw PreconditionError("LDL needs a square matrix");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (m(i, j) != m(j, i)) throw PreconditionError("LDL needs a symmetric matrix");

    Matrix<Rational> a = m;
    const std::size_t n = a.rows();
    LdlResult out;
    out.positive_semidefinite = true;
    std::vector<bool> eliminated(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        const Rational d = a(k, k);
        out.pivots.push_back(d);
        if (sgn(d) < 0) out.positive_semidefinite = false;
        if (sgn(d) == 0) {
            // A PSD matrix with a zero diagonal entry has the whole row zero.
            for (std::size_t j = k + 1; j < n; ++j)
                if (sgn(a(k, j)) != 0) out.positive_semidefinite = false;
            continue;
        }
        ++out.rank;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (sgn(a(i, k)) == 0) continue;
            Rational l = a(i, k) / d;
            for (std::size_t j = k + 1; j < n; ++j)
                if (sgn(a(k, j)) != 0) a(i, j) -= l * a(k, j);
            a(i, k) = 0;
        }
        for (std::size_t j = k + 1; j < n; ++j) a(k, j) = 0;
    }
    return out;
}

}  // namespace cpcross
