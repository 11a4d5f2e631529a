#include "cpcross/cp_finite.hpp"

#include <algorithm>
#include <numeric>

namespace cpcross {

Function indicator(std::size_t n, const std::vector<std::size_t>& support)
{
    Function f(n, Rational(0));
    for (auto y : support) f.at(y) = 1;
    return f;
}

Function pointwise(const Function& a, const Function& b)
{
    if (a.size() != b.size()) throw PreconditionError("functions on different point sets");
    Function c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] * b[i];
    return c;
}

namespace {

bool is_zero(const Function& f)
{
    return std::all_of(f.begin(), f.end(), [](const Rational& q) { return sgn(q) == 0; });
}

std::vector<std::size_t> all_points(std::size_t n)
{
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

std::vector<std::size_t> subset_from_mask(std::size_t n, std::uint64_t mask)
{
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1U) s.push_back(i);
    return s;
}

constexpr std::size_t kSubsetEnumerationLimit = 16;

}  // namespace

PositiveMapMatrix::PositiveMapMatrix(Matrix<Rational> m) : m_(std::move(m))
{
    if (m_.rows() != m_.cols()) throw InputError("positive map matrix must be square");
    for (std::size_t i = 0; i < m_.rows(); ++i)
        for (std::size_t j = 0; j < m_.cols(); ++j) {
            m_(i, j).canonicalize();
            if (sgn(m_(i, j)) < 0)
                throw InputError("negative entry " + to_string(m_(i, j)) + " at (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
        }
}

// ---------------------------------------------------------------------------

Subalgebra::Subalgebra(std::size_t points, std::vector<std::vector<std::size_t>> blocks) : points_(points)
{
    std::vector<bool> seen(points, false);
    for (auto& b : blocks) {
        if (b.empty()) throw InputError("empty block in subalgebra partition");
        std::sort(b.begin(), b.end());
        for (auto x : b) {
            if (x >= points) throw InputError("block point " + std::to_string(x) + " out of range");
            if (seen[x]) throw InputError("point " + std::to_string(x) + " appears in two blocks");
            seen[x] = true;
        }
    }
    std::sort(blocks.begin(), blocks.end());
    blocks_ = std::move(blocks);
}

Subalgebra Subalgebra::whole(std::size_t points)
{
    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t x = 0; x < points; ++x) blocks.push_back({x});
    return Subalgebra(points, std::move(blocks));
}

Subalgebra Subalgebra::constants(std::size_t points)
{
    if (points == 0) return Subalgebra(0, {});
    return Subalgebra(points, {all_points(points)});
}

Subalgebra Subalgebra::ideal(std::size_t points, const std::vector<std::size_t>& support)
{
    std::vector<std::vector<std::size_t>> blocks;
    for (auto x : support) blocks.push_back({x});
    return Subalgebra(points, std::move(blocks));
}

std::vector<std::size_t> Subalgebra::support() const
{
    std::vector<std::size_t> s;
    for (const auto& b : blocks_) s.insert(s.end(), b.begin(), b.end());
    std::sort(s.begin(), s.end());
    return s;
}

std::vector<std::size_t> Subalgebra::zero_set() const
{
    auto s = support();
    std::vector<std::size_t> z;
    for (std::size_t x = 0; x < points_; ++x)
        if (!std::binary_search(s.begin(), s.end(), x)) z.push_back(x);
    return z;
}

std::vector<Function> Subalgebra::basis() const
{
    std::vector<Function> out;
    for (const auto& b : blocks_) out.push_back(indicator(points_, b));
    return out;
}

bool Subalgebra::contains(const Function& a) const
{
    if (a.size() != points_) return false;
    for (const auto& b : blocks_)
        for (auto x : b)
            if (a[x] != a[b.front()]) return false;
    for (auto z : zero_set())
        if (sgn(a[z]) != 0) return false;
    return true;
}

bool Subalgebra::contains(const Subalgebra& other) const
{
    if (other.points_ != points_) return false;
    for (const auto& f : other.basis())
        if (!contains(f)) return false;
    return true;
}

bool Subalgebra::is_hereditary() const
{
    return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& b) { return b.size() == 1; });
}

std::optional<Subalgebra> subalgebra_from_span(std::size_t points, const std::vector<Function>& span)
{
    // Points are identified when every spanning function agrees on them.
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<bool> placed(points, false);
    for (std::size_t x = 0; x < points; ++x) {
        if (placed[x]) continue;
        bool zero = std::all_of(span.begin(), span.end(), [&](const Function& f) { return sgn(f[x]) == 0; });
        if (zero) continue;
        std::vector<std::size_t> block{x};
        placed[x] = true;
        for (std::size_t y = x + 1; y < points; ++y) {
            if (placed[y]) continue;
            bool same = std::all_of(span.begin(), span.end(), [&](const Function& f) { return f[x] == f[y]; });
            if (same) {
                block.push_back(y);
                placed[y] = true;
            }
        }
        blocks.push_back(std::move(block));
    }
    // The span lies inside the partition algebra; it is a subalgebra exactly when
    // the dimensions agree.
    std::size_t dim = span.empty() ? 0 : rank(from_rows(span, points));
    if (dim != blocks.size()) return std::nullopt;
    return Subalgebra(points, std::move(blocks));
}

// ---------------------------------------------------------------------------

Rational op_norm(const PositiveMapMatrix& m)
{
    Rational best = 0;
    for (std::size_t x = 0; x < m.size(); ++x) {
        Rational row = 0;
        for (std::size_t y = 0; y < m.size(); ++y) row += m(x, y);
        best = std::max(best, row);
    }
    return best;
}

GnsKernel gns_kernel(const PositiveMapMatrix& m)
{
    const std::size_t n = m.size();
    GnsKernel out;
    for (std::size_t y = 0; y < n; ++y) {
        bool zero = true;
        for (std::size_t x = 0; x < n; ++x) zero = zero && sgn(m(x, y)) == 0;
        if (zero) out.zero_set.push_back(y);
    }
    if (n <= kSubsetEnumerationLimit) {
        // Largest S such that phi kills chi_T for every T inside S; chi_T with
        // T a subset spans the ideal chi_S A.
        std::vector<std::size_t> best;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            auto s = subset_from_mask(n, mask);
            if (s.size() <= best.size()) continue;
            bool inside = true;
            for (std::uint64_t sub = mask; inside && sub; sub = (sub - 1) & mask)
                inside = is_zero(m.apply(indicator(n, subset_from_mask(n, sub))));
            if (inside) best = s;
        }
        out.brute_force_agrees = best == out.zero_set;
        if (!out.brute_force_agrees) throw InvariantViolation("GNS-kernel column test disagrees with brute force");
    }
    return out;
}

namespace {

// {a : a constant on each row support, and zero there when the row sum is < 1}.
// Valid as the multiplicative domain only for contractive maps.
Subalgebra contractive_domain(const PositiveMapMatrix& m)
{
    const std::size_t n = m.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<bool> forced_zero(n, false);
    for (std::size_t x = 0; x < n; ++x) {
        Rational row = 0;
        std::optional<std::size_t> first;
        for (std::size_t y = 0; y < n; ++y) {
            if (sgn(m(x, y)) == 0) continue;
            row += m(x, y);
            if (first)
                parent[find(y)] = find(*first);
            else
                first = y;
        }
        if (row < 1)
            for (std::size_t y = 0; y < n; ++y)
                if (sgn(m(x, y)) != 0) forced_zero[y] = true;
    }
    std::vector<bool> zero_class(n, false);
    for (std::size_t y = 0; y < n; ++y)
        if (forced_zero[y]) zero_class[find(y)] = true;
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::optional<std::size_t>> block_of_root(n);
    for (std::size_t y = 0; y < n; ++y) {
        auto r = find(y);
        if (zero_class[r]) continue;
        if (!block_of_root[r]) {
            block_of_root[r] = blocks.size();
            blocks.emplace_back();
        }
        blocks[*block_of_root[r]].push_back(y);
    }
    return Subalgebra(n, std::move(blocks));
}

}  // namespace

MultiplicativeDomain multiplicative_domain(const PositiveMapMatrix& m)
{
    const std::size_t n = m.size();
    // a(y) - sum_z M[x,z] a(z) = 0 whenever M[x,y] > 0.
    std::vector<Function> equations;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (sgn(m(x, y)) == 0) continue;
            Function eq(n, Rational(0));
            for (std::size_t z = 0; z < n; ++z) eq[z] -= m(x, z);
            eq[y] += 1;
            equations.push_back(std::move(eq));
        }
    MultiplicativeDomain out;
    if (equations.empty()) {
        out.solution_basis = Subalgebra::whole(n).basis();
    } else {
        out.solution_basis = nullspace(from_rows(equations, n));
    }
    auto sub = subalgebra_from_span(n, out.solution_basis);
    if (!sub) throw InvariantViolation("multiplicative-domain solution space is not closed under products");
    out.subalgebra = *sub;
    out.contractive = op_norm(m) <= 1;
    if (out.contractive) {
        out.single_variable_cross_check = true;
        if (contractive_domain(m) != out.subalgebra)
            throw InvariantViolation("multiplicative domain disagrees with the contractive characterization");
    }
    return out;
}

FaithfulnessReport faithfulness_report(const PositiveMapMatrix& m, const std::vector<std::size_t>& support)
{
    const std::size_t n = m.size();
    for (auto x : support)
        if (x >= n) throw InputError("support point " + std::to_string(x) + " out of range");
    FaithfulnessReport rep;

    // i) faithful on the ideal ACA = chi_S A: no nonzero positive chi_T, T in S, is killed.
    std::uint64_t s_mask = 0;
    for (auto x : support) s_mask |= std::uint64_t{1} << x;
    rep.faithful_on_generated_ideal = true;
    if (n <= kSubsetEnumerationLimit) {
        for (std::uint64_t sub = s_mask; sub; sub = (sub - 1) & s_mask)
            if (is_zero(m.apply(indicator(n, subset_from_mask(n, sub))))) {
                rep.faithful_on_generated_ideal = false;
                break;
            }
    } else {
        for (auto x : support)
            if (is_zero(m.apply(indicator(n, {x})))) rep.faithful_on_generated_ideal = false;
    }

    // ii) faithful on CAC, spanned by c a c' for indicators c, c' of C and points a.
    std::vector<Function> products;
    for (auto c : support)
        for (std::size_t a = 0; a < n; ++a)
            for (auto d : support) {
                auto f = pointwise(pointwise(indicator(n, {c}), indicator(n, {a})), indicator(n, {d}));
                if (!is_zero(f)) products.push_back(std::move(f));
            }
    auto cac = subalgebra_from_span(n, products);
    if (!cac) throw InvariantViolation("CAC is not a subalgebra");
    rep.faithful_on_hereditary = true;
    for (const auto& f : cac->basis())
        if (is_zero(m.apply(pointwise(f, f)))) {
            rep.faithful_on_hereditary = false;
            break;
        }

    // iii) almost faithful on the ideal: it meets the GNS-kernel trivially.
    auto z = gns_kernel(m).zero_set;
    rep.almost_faithful = true;
    for (auto x : support)
        if (std::binary_search(z.begin(), z.end(), x)) {
            rep.almost_faithful = false;
            rep.witness = x;
            break;
        }

    if (rep.faithful_on_generated_ideal != rep.faithful_on_hereditary ||
        rep.faithful_on_hereditary != rep.almost_faithful)
        throw InvariantViolation("faithfulness conditions disagree on a commutative algebra");
    rep.faithful = rep.almost_faithful;
    return rep;
}

SupportRelation support_relation(const PositiveMapMatrix& m)
{
    SupportRelation rel;
    rel.fibers.resize(m.size());
    for (std::size_t x = 0; x < m.size(); ++x) {
        for (std::size_t y = 0; y < m.size(); ++y)
            if (sgn(m(x, y)) != 0) {
                rel.pairs.emplace_back(x, y);
                rel.fibers[x].push_back(y);
            }
        if (!rel.fibers[x].empty()) rel.domain.push_back(x);
    }
    return rel;
}

Quiver quiver(const PositiveMapMatrix& m)
{
    Quiver q;
    q.vertices = m.size();
    auto rel = support_relation(m);
    for (auto [x, y] : rel.pairs) q.edges.push_back({x, y, m(x, y)});
    q.domain = rel.domain;
    q.domain_proper = rel.domain.size() < m.size();
    return q;
}

PositiveMapMatrix rebuild_map(const Quiver& q)
{
    Matrix<Rational> m(q.vertices, q.vertices);
    for (const auto& e : q.edges) m(e.source, e.range) += e.weight;
    return PositiveMapMatrix(std::move(m));
}

ConditionalExpectationReport is_conditional_expectation(const PositiveMapMatrix& m, const Subalgebra& b)
{
    const std::size_t n = m.size();
    if (b.points() != n) throw PreconditionError("subalgebra lives on a different point set");
    ConditionalExpectationReport rep;
    auto fail = [&](std::string axiom, std::string detail) {
        rep.first_failure = std::move(axiom);
        rep.detail = std::move(detail);
        return rep;
    };
    if (!(m.matrix() * m.matrix() == m.matrix())) return fail("idempotence", "M^2 != M");
    for (std::size_t y = 0; y < n; ++y)
        if (!b.contains(m.apply(indicator(n, {y}))))
            return fail("image", "phi(e_" + std::to_string(y) + ") is not in B");
    for (const auto& f : b.basis())
        if (m.apply(f) != f) return fail("identity on B", "phi moves a block indicator");
    // Entries are nonnegative by construction of PositiveMapMatrix.
    auto md = multiplicative_domain(m);
    if (!md.subalgebra.contains(b)) return fail("B inside MD", "B is not contained in the multiplicative domain");
    rep.is_conditional_expectation = true;
    return rep;
}

// ---------------------------------------------------------------------------

Endomorphism::Endomorphism(std::vector<std::optional<std::size_t>> point_map) : tau_(std::move(point_map))
{
    for (const auto& t : tau_)
        if (t && *t >= tau_.size()) throw InputError("point map leaves the point set");
}

Endomorphism Endomorphism::from_matrix(const Matrix<Rational>& m)
{
    if (m.rows() != m.cols()) throw InputError("not an endomorphism: matrix is not square");
    std::vector<std::optional<std::size_t>> tau(m.rows());
    for (std::size_t x = 0; x < m.rows(); ++x)
        for (std::size_t y = 0; y < m.cols(); ++y) {
            if (sgn(m(x, y)) == 0) continue;
            if (m(x, y) != 1 || tau[x])
                throw InputError("not an endomorphism: row " + std::to_string(x) +
                                 " is not zero or a single unit entry");
            tau[x] = y;
        }
    return Endomorphism(std::move(tau));
}

Endomorphism Endomorphism::identity(std::size_t n)
{
    std::vector<std::optional<std::size_t>> tau(n);
    for (std::size_t x = 0; x < n; ++x) tau[x] = x;
    return Endomorphism(std::move(tau));
}

Function Endomorphism::apply(const Function& a) const
{
    if (a.size() != tau_.size()) throw PreconditionError("function on a different point set");
    Function out(a.size(), Rational(0));
    for (std::size_t x = 0; x < a.size(); ++x)
        if (tau_[x]) out[x] = a[*tau_[x]];
    return out;
}

Matrix<Rational> Endomorphism::matrix() const
{
    Matrix<Rational> m(tau_.size(), tau_.size());
    for (std::size_t x = 0; x < tau_.size(); ++x)
        if (tau_[x]) m(x, *tau_[x]) = 1;
    return m;
}

Subalgebra Endomorphism::range() const
{
    std::vector<std::vector<std::size_t>> fibres(tau_.size());
    for (std::size_t x = 0; x < tau_.size(); ++x)
        if (tau_[x]) fibres[*tau_[x]].push_back(x);
    std::vector<std::vector<std::size_t>> blocks;
    for (auto& f : fibres)
        if (!f.empty()) blocks.push_back(std::move(f));
    return Subalgebra(tau_.size(), std::move(blocks));
}

TransferPairReport check_transfer_pair(const Matrix<Rational>& alpha_matrix, const PositiveMapMatrix& l)
{
    return check_transfer_pair(Endomorphism::from_matrix(alpha_matrix), l);
}

TransferPairReport check_transfer_pair(const Endomorphism& alpha, const PositiveMapMatrix& l)
{
    const std::size_t n = l.size();
    if (alpha.size() != n) throw PreconditionError("endomorphism and transfer act on different point sets");
    TransferPairReport rep;

    rep.is_exel = true;
    for (std::size_t x = 0; x < n && rep.is_exel; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            auto ex = indicator(n, {x});
            auto ey = indicator(n, {y});
            if (l.apply(pointwise(ex, alpha.apply(ey))) != pointwise(l.apply(ex), ey)) {
                rep.is_exel = false;
                rep.witness = "L(e_" + std::to_string(x) + " alpha(e_" + std::to_string(y) + ")) != L(e_" +
                              std::to_string(x) + ") e_" + std::to_string(y);
                break;
            }
        }

    Subalgebra range = alpha.range();
    rep.hereditary_range = range.is_hereditary();
    if (!rep.is_exel) return rep;

    const Matrix<Rational> a = alpha.matrix();
    rep.is_regular = a * l.matrix() * a == a;
    std::vector<std::size_t> image;
    for (const auto& t : alpha.point_map())
        if (t) image.push_back(*t);
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());
    bool projection_form = l.apply(Function(n, Rational(1))) == indicator(n, image);
    if (projection_form != rep.is_regular)
        throw InvariantViolation("regularity tests disagree: alpha L alpha = alpha vs L(1) = chi(image)");
    if (!rep.is_regular) rep.witness = "alpha L alpha != alpha";

    bool corner_identity = true;
    const Function alpha_one = alpha.apply(Function(n, Rational(1)));
    for (std::size_t y = 0; y < n && corner_identity; ++y) {
        auto ey = indicator(n, {y});
        corner_identity = alpha.apply(l.apply(ey)) == pointwise(pointwise(alpha_one, ey), alpha_one);
    }
    rep.is_corner = rep.is_regular && rep.hereditary_range;
    if (corner_identity != rep.is_corner)
        throw InvariantViolation("corner tests disagree: hereditary range vs alpha(L(a)) = alpha(1) a alpha(1)");

    if (rep.hereditary_range) {
        // Unknown L as n*n entries, row-major; the transfer identity and
        // regularity are linear in L.
        const std::size_t vars = n * n;
        std::vector<Function> rows;
        Function rhs;
        auto var = [n](std::size_t x, std::size_t y) { return x * n + y; };
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
                // L(e_x alpha(e_y)) - L(e_x) e_y = 0, evaluated at every point p.
                auto ex_alpha = pointwise(indicator(n, {x}), alpha.apply(indicator(n, {y})));
                for (std::size_t p = 0; p < n; ++p) {
                    Function row(vars, Rational(0));
                    for (std::size_t z = 0; z < n; ++z) row[var(p, z)] += ex_alpha[z];
                    if (p == y) row[var(p, x)] -= 1;
                    rows.push_back(std::move(row));
                    rhs.push_back(0);
                }
            }
        // (alpha L alpha)[x,y] = alpha[x,y].
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
                Function row(vars, Rational(0));
                for (std::size_t p = 0; p < n; ++p)
                    for (std::size_t q = 0; q < n; ++q)
                        if (sgn(a(x, p)) != 0 && sgn(a(q, y)) != 0) row[var(p, q)] += a(x, p) * a(q, y);
                rows.push_back(std::move(row));
                rhs.push_back(a(x, y));
            }
        auto system = from_rows(rows, vars);
        auto particular = solve(system, rhs);
        if (!particular) {
            rep.regular_transfer_count = 0;
            rep.regular_transfer_summary = "0";
        } else {
            auto free_dim = nullspace(system).size();
            if (free_dim == 0) {
                bool positive = std::all_of(particular->begin(), particular->end(),
                                            [](const Rational& q) { return sgn(q) >= 0; });
                rep.regular_transfer_count = positive ? 1 : 0;
                rep.regular_transfer_summary = positive ? "1" : "0";
            } else {
                rep.regular_transfer_dimension = free_dim;
                rep.regular_transfer_summary = "infinite (dim " + std::to_string(free_dim) + ")";
                throw InvariantViolation("hereditary-range endomorphism admits a " + rep.regular_transfer_summary +
                                         " family of regular transfer operators");
            }
        }
    }
    return rep;
}

}  // namespace cpcross
