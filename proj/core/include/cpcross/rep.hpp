#pragma once

#include "cpcross/cp_finite.hpp"
#include "cpcross/diag.hpp"
#include "cpcross/matrix.hpp"

#include <variant>

namespace cpcross {

struct RelationDefect {
    std::string relation;  // e.g. "S_e^* S_e = P_w"
    long double max_abs = 0;
    Rational normalized_hs;  // ||D||_F^2 / dim
    bool on_frontier = true;  // every nonzero entry touches a frontier basis vector
};

// Cuntz-Krieger family on l^2 of a finite set of paths: S_e d_mu = d_{e mu}
// when e mu is a basis path, P_v projects onto paths with range v.
struct MatrixRep {
    GraphPtr graph;
    std::vector<Path> basis;
    std::vector<Matrix<Rational>> s;  // per edge
    std::vector<Matrix<Rational>> p;  // per vertex
    bool exact = true;
    std::optional<std::size_t> depth;  // window depth in truncated mode
    std::vector<std::size_t> frontier;
    std::vector<RelationDefect> defects;

    std::size_t dimension() const { return basis.size(); }
    std::optional<std::size_t> index_of(const Path& path) const;
    // Diagonal operator with entry a(mu) at the basis path mu.
    Matrix<Rational> pi(const DiagElement& a) const;
    // S_mu = S_{mu_1} ... S_{mu_n}; P_v for a vertex path.
    Matrix<Rational> s_path(const Path& mu) const;
};

// Exact Cuntz-Krieger family on the finite boundary of an acyclic graph.
MatrixRep boundary_representation(const GraphPtr& g);

// Window of paths of length <= depth whose source is a source vertex or can be
// reached backwards forever (lies downstream of a cycle). Reports defects.
MatrixRep truncated_representation(const GraphPtr& g, std::size_t depth);

std::vector<RelationDefect> cuntz_krieger_defects(const MatrixRep& rep);

// ---------------------------------------------------------------------------

// u = sum_e sqrt(lambda_e) S_e, exact in Q(sqrt r) when every lambda_e is a
// rational square times one common squarefree r, in 128-bit floating point
// otherwise.
struct UOperator {
    std::variant<Matrix<QuadraticSurd>, Matrix<Float128>> matrix;
    unsigned long radicand = 1;
    bool partial_isometry = false;   // u^* u idempotent
    bool normalized = false;         // every emitting vertex has lambda-sum 1

    bool exact() const { return std::holds_alternative<Matrix<QuadraticSurd>>(matrix); }
    std::string mode() const;
};

// sqrt(q) = c sqrt(r) with c rational and r squarefree, when the factoring is cheap.
std::optional<std::pair<Rational, unsigned long>> exact_square_root(const Rational& q);

UOperator build_u(const MatrixRep& rep, const WeightSystem& lambda, bool force_float = false);

constexpr long double kFloatRelativeTolerance = 1e-20L;

struct IdentityCheck {
    std::string name;
    bool passed = true;
    bool skipped = false;
    std::size_t instances = 0;
    long double residual = 0;  // max relative residual over instances
    std::optional<std::string> witness;
};

struct RepresentationReport {
    std::string mode;  // "exact" or "float128"
    bool exact_basis = true;
    bool interior_only = false;  // truncated window: compressed to paths shorter than its depth
    std::vector<IdentityCheck> checks;
    bool passed() const;
};

struct VerifyOptions {
    // Weights used for L in the transfer relation; defaults to lambda.
    std::optional<WeightSystem> transfer_weights;
    bool force_float = false;
};

// For every q_mu with |mu| <= depth:
//   u^* pi(a) u = pi(L(a)),  u pi(a) = pi(alpha(a)) u,
//   pi(q_mu) = lambda_{mu_1}^{-1} pi(q_{mu_1}) u pi(q_{sigma mu}) u^* pi(q_{mu_1})  for |mu| >= 1,
//   u pi(a) u^* = pi(alpha(a))  when the system is a corner.
RepresentationReport verify_representation(const MatrixRep& rep, const WeightSystem& lambda, std::size_t depth,
                                           const VerifyOptions& options = {});
// Throws InvariantViolation on any failed check.
RepresentationReport verify_representation_strict(const MatrixRep& rep, const WeightSystem& lambda, std::size_t depth);

struct GaugeTerm {
    std::vector<std::string> tokens;  // "u", "u*", "S", "S*", "pi", "P"
};

struct GaugeIdentity {
    std::string name;
    GaugeTerm lhs;
    GaugeTerm rhs;
};

int gauge_degree(const GaugeTerm& t);
// The identity list checked by verify_representation and the CK relations.
std::vector<GaugeIdentity> verified_identity_list();
// D S_e D^{-1} = 2 S_e and D pi(a) D^{-1} = pi(a) with D = diag(2^{|mu|}).
bool gauge_scaling_holds(const MatrixRep& rep);

// ---------------------------------------------------------------------------

// A representation of a finite commutative algebra through the images of its
// minimal projections, together with an operator S.
template <class T>
struct RepPair {
    std::vector<Matrix<T>> atom_images;
    Matrix<T> s;
};

template <class T>
struct RedundancyResult {
    bool exists = false;
    std::optional<Matrix<T>> k;
    bool member = false;  // pi(a) itself is an admissible k
};

namespace detail {

template <class T>
std::vector<T> flatten(const Matrix<T>& m)
{
    std::vector<T> v;
    v.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
    return v;
}

template <class T>
Matrix<T> unflatten(const std::vector<T>& v, std::size_t n)
{
    Matrix<T> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = v[i * n + j];
    return m;
}

// Basis (as matrices) of span{pi(x) S pi(y) S^* pi(z)}.
template <class T>
std::vector<Matrix<T>> hereditary_span(const RepPair<T>& pair)
{
    const std::size_t n = pair.s.rows();
    std::vector<std::vector<T>> rows;
    std::vector<Matrix<T>> middle;
    for (const auto& y : pair.atom_images) middle.push_back(pair.s * y * pair.s.adjoint());
    for (const auto& x : pair.atom_images)
        for (const auto& m : middle) {
            if (m.is_zero()) continue;
            for (const auto& z : pair.atom_images) {
                auto k = x * m * z;
                if (!k.is_zero()) rows.push_back(flatten(k));
            }
        }
    if (rows.empty()) return {};
    auto ech = row_reduce(from_rows(rows, n * n));
    std::vector<Matrix<T>> basis;
    for (std::size_t r = 0; r < ech.rank(); ++r) {
        std::vector<T> v(n * n);
        for (std::size_t c = 0; c < n * n; ++c) v[c] = ech.reduced(r, c);
        basis.push_back(unflatten(v, n));
    }
    return basis;
}

}  // namespace detail

// Looks for k in span pi(A) S pi(A) S^* pi(A) with pi(a) pi(b) S = k pi(b) S for
// every atom b.
template <class T>
RedundancyResult<T> redundancy_test(const RepPair<T>& pair, const Matrix<T>& pi_a)
{
    static_assert(ScalarTraits<T>::exact, "redundancy_test needs exact arithmetic");
    const std::size_t n = pair.s.rows();
    RedundancyResult<T> out;
    auto span = detail::hereditary_span(pair);

    // Unknowns c_t with (pi(a) - sum_t c_t K_t) pi(b) S = 0 for each atom b.
    std::vector<std::vector<T>> rows;
    std::vector<T> rhs;
    for (const auto& b : pair.atom_images) {
        auto bs = b * pair.s;
        if (bs.is_zero()) continue;
        auto target = detail::flatten(pi_a * bs);
        std::vector<std::vector<T>> columns;
        for (const auto& k : span) columns.push_back(detail::flatten(k * bs));
        for (std::size_t e = 0; e < n * n; ++e) {
            std::vector<T> row;
            bool nonzero = !ScalarTraits<T>::is_zero(target[e]);
            for (const auto& c : columns) {
                row.push_back(c[e]);
                nonzero = nonzero || !ScalarTraits<T>::is_zero(c[e]);
            }
            if (!nonzero) continue;
            rows.push_back(std::move(row));
            rhs.push_back(target[e]);
        }
    }
    std::optional<std::vector<T>> coeffs;
    if (rows.empty())
        coeffs = std::vector<T>(span.size(), T(0));
    else if (span.empty())
        coeffs = std::nullopt;  // a nonzero right-hand side with no unknowns
    else
        coeffs = solve(from_rows(rows, span.size()), rhs);
    if (!coeffs) return out;
    out.exists = true;
    Matrix<T> k(n, n);
    for (std::size_t t = 0; t < span.size(); ++t) k += span[t] * (*coeffs)[t];
    out.k = std::move(k);

    // pi(a) is admissible exactly when it lies in the span.
    if (pi_a.is_zero()) {
        out.member = true;
    } else if (!span.empty()) {
        std::vector<std::vector<T>> basis_rows;
        for (const auto& s : span) basis_rows.push_back(detail::flatten(s));
        auto with = basis_rows;
        with.push_back(detail::flatten(pi_a));
        out.member = rank(from_rows(with, n * n)) == span.size();
    }
    return out;
}

struct CovarianceIdealReport {
    std::vector<std::size_t> ideal;  // atoms a with S S^* pi(a) = pi(a)
    bool partial_isometry = false;
    bool range_commutes = false;
    bool redundancy_agrees = false;
};

// S^* pi(a) S = pi(beta(a)) for the endomorphism beta on atoms is verified
// first; then J = {a : S S^* pi(a) = pi(a)} is returned.
template <class T>
CovarianceIdealReport endo_covariance_ideal(const RepPair<T>& pair, const Endomorphism& beta)
{
    const std::size_t atoms = pair.atom_images.size();
    if (beta.size() != atoms) throw PreconditionError("endomorphism acts on a different number of atoms");
    auto image_of = [&](const Function& f) {
        Matrix<T> m(pair.s.rows(), pair.s.cols());
        for (std::size_t i = 0; i < atoms; ++i)
            if (sgn(f[i]) != 0) m += pair.atom_images[i] * ScalarTraits<T>::from(f[i]);
        return m;
    };
    const Matrix<T> s_adj = pair.s.adjoint();
    for (std::size_t i = 0; i < atoms; ++i)
        if (!(s_adj * pair.atom_images[i] * pair.s == image_of(beta.apply(indicator(atoms, {i})))))
            throw PreconditionError("S^* pi(a) S != pi(beta(a)) at atom " + std::to_string(i));

    CovarianceIdealReport rep;
    rep.partial_isometry = pair.s * s_adj * pair.s == pair.s;
    if (!rep.partial_isometry) throw InvariantViolation("S is not a partial isometry");
    const Matrix<T> range = pair.s * s_adj;
    rep.range_commutes = true;
    for (const auto& a : pair.atom_images) rep.range_commutes = rep.range_commutes && range * a == a * range;
    if (!rep.range_commutes) throw InvariantViolation("S S^* does not commute with pi(A)");

    rep.redundancy_agrees = true;
    for (std::size_t i = 0; i < atoms; ++i) {
        bool in_ideal = range * pair.atom_images[i] == pair.atom_images[i];
        if (in_ideal) rep.ideal.push_back(i);
        if constexpr (ScalarTraits<T>::exact) {
            if (redundancy_test(pair, pair.atom_images[i]).member != in_ideal) rep.redundancy_agrees = false;
        }
    }
    if (!rep.redundancy_agrees) throw InvariantViolation("covariance ideal disagrees with redundancy memberships");
    return rep;
}

// Pair (pi, u) on the boundary basis of an acyclic representation; atoms are
// the boundary points.
RepPair<QuadraticSurd> boundary_pair(const MatrixRep& rep, const WeightSystem& lambda);

struct EdgeCovarianceCheck {
    std::string edge;
    Endomorphism beta;  // S_e^* pi(a) S_e = pi(beta(a))
    CovarianceIdealReport report;
    bool ideal_is_cylinder = false;  // J is the set of boundary points starting with e
};

// The covariance ideal of (pi, S_e) for every edge of an exact acyclic
// representation, cross-checked against redundancy memberships.
std::vector<EdgeCovarianceCheck> edge_covariance_checks(const MatrixRep& rep);

}  // namespace cpcross
