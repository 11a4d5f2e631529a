#include "cpcross/correspondence.hpp"

#include <algorithm>

namespace cpcross {

Function tensor_inner_product(const PositiveMapMatrix& m, std::size_t a, std::size_t b, std::size_t c, std::size_t d)
{
    const std::size_t n = m.size();
    auto phi = m.apply(pointwise(indicator(n, {a}), indicator(n, {c})));
    return pointwise(pointwise(indicator(n, {b}), phi), indicator(n, {d}));
}

namespace {

Rational total(const Function& f)
{
    Rational s = 0;
    for (const auto& v : f) s += v;
    return s;
}

bool is_diagonal(const Matrix<Rational>& g)
{
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            if (i != j && sgn(g(i, j)) != 0) return false;
    return true;
}

}  // namespace

Correspondence gns_correspondence(const PositiveMapMatrix& m)
{
    const std::size_t n = m.size();
    Correspondence x;
    x.points = n;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) x.ambient.emplace_back(a, b);

    const std::size_t big = n * n;
    x.gram = Matrix<Rational>(big, big);
    for (std::size_t i = 0; i < big; ++i)
        for (std::size_t j = 0; j < big; ++j) {
            auto [a, b] = x.ambient[i];
            auto [c, d] = x.ambient[j];
            x.gram(i, j) = total(tensor_inner_product(m, a, b, c, d));
        }
    x.gram_ldl = ldl_decompose(x.gram);
    if (!x.gram_ldl.positive_semidefinite) throw InvariantViolation("GNS Gram matrix is not positive semidefinite");
    if (!is_diagonal(x.gram)) throw InvariantViolation("GNS Gram matrix is not diagonal in the pair basis");

    for (std::size_t i = 0; i < big; ++i) {
        auto [px, py] = x.ambient[i];
        if (x.gram(i, i) != m(py, px)) throw InvariantViolation("Gram entry at (x, y) differs from M[y, x]");
        if (sgn(x.gram(i, i)) != 0) x.surviving.push_back(x.ambient[i]);
    }
    if (rank(x.gram) != x.surviving.size()) throw InvariantViolation("Gram rank differs from the surviving pair count");

    const std::size_t d = x.surviving.size();
    for (std::size_t z = 0; z < n; ++z) {
        Matrix<Rational> left(d, d), right(d, d);
        for (std::size_t k = 0; k < d; ++k) {
            if (x.surviving[k].first == z) left(k, k) = 1;
            if (x.surviving[k].second == z) right(k, k) = 1;
        }
        if (left.is_zero()) x.left_kernel.push_back(z);
        x.left_action.push_back(std::move(left));
        x.right_action.push_back(std::move(right));
    }
    if (x.left_kernel != gns_kernel(m).zero_set)
        throw InvariantViolation("left-action kernel differs from the GNS-kernel");
    return x;
}

QuiverDimensionReport quiver_dimension_check(const PositiveMapMatrix& m)
{
    const std::size_t n = m.size();
    auto x = gns_correspondence(m);
    auto q = quiver(m);
    QuiverDimensionReport rep;
    rep.dimension = x.dimension();
    rep.relation_size = q.edges.size();
    rep.dimensions_equal = rep.dimension == rep.relation_size;

    // Position of each quiver edge (source, range) in the quotient basis.
    auto edge_index = [&](std::size_t source, std::size_t range) -> std::optional<std::size_t> {
        for (std::size_t k = 0; k < q.edges.size(); ++k)
            if (q.edges[k].source == source && q.edges[k].range == range) return k;
        return std::nullopt;
    };
    std::vector<std::size_t> to_edge;
    bool mapped = rep.dimensions_equal;
    for (auto [px, py] : x.surviving) {
        auto k = edge_index(py, px);
        if (!k) {
            mapped = false;
            break;
        }
        to_edge.push_back(*k);
    }

    rep.actions_match = mapped;
    rep.inner_products_match = mapped;
    rep.source_left_formula_matches = mapped;
    if (mapped) {
        for (std::size_t z = 0; z < n; ++z)
            for (std::size_t k = 0; k < x.dimension(); ++k) {
                const auto& e = q.edges[to_edge[k]];
                Rational range_side = e.range == z ? 1 : 0;
                Rational source_side = e.source == z ? 1 : 0;
                if (x.left_action[z](k, k) != range_side || x.right_action[z](k, k) != source_side)
                    rep.actions_match = false;
                if (x.left_action[z](k, k) != source_side || x.right_action[z](k, k) != range_side)
                    rep.source_left_formula_matches = false;
            }
        // Quiver inner product <f, g>(v) = sum over edges e with s(e) = v of f(e) g(e) lambda_v(e).
        for (std::size_t i = 0; i < x.dimension(); ++i)
            for (std::size_t j = 0; j < x.dimension(); ++j) {
                auto [a, b] = x.surviving[i];
                auto [c, d] = x.surviving[j];
                Function expected(n, Rational(0));
                if (i == j) {
                    const auto& e = q.edges[to_edge[i]];
                    expected[e.source] = e.weight;
                }
                if (tensor_inner_product(m, a, b, c, d) != expected) rep.inner_products_match = false;
            }
    }
    if (!rep.dimensions_equal || !rep.actions_match || !rep.inner_products_match)
        throw InvariantViolation("GNS correspondence does not match the quiver correspondence");
    return rep;
}

std::vector<std::size_t> katsura_ideal(const PositiveMapMatrix& m)
{
    auto z = gns_kernel(m).zero_set;
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < m.size(); ++x)
        if (!std::binary_search(z.begin(), z.end(), x)) out.push_back(x);
    return out;
}

ModuleIsoReport exel_module_iso_check(const Endomorphism& alpha, const PositiveMapMatrix& l)
{
    if (!check_transfer_pair(alpha, l).is_exel) throw PreconditionError("not an Exel system");
    const std::size_t n = l.size();
    ModuleIsoReport rep;

    // M_L on the basis e_x: <e_x, e_y> = L(e_x e_y).
    auto module_inner = [&](const Function& f, const Function& g) { return l.apply(pointwise(f, g)); };
    Matrix<Rational> module_gram(n, n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            module_gram(x, y) = total(module_inner(indicator(n, {x}), indicator(n, {y})));

    // Psi(e_a (x) e_b) = e_a alpha(e_b), one column per pair.
    Matrix<Rational> psi(n, n * n);
    std::vector<Function> images;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            auto f = pointwise(indicator(n, {a}), alpha.apply(indicator(n, {b})));
            for (std::size_t x = 0; x < n; ++x) psi(x, a * n + b) = f[x];
            images.push_back(std::move(f));
        }

    rep.isometric = true;
    for (std::size_t i = 0; i < n * n && rep.isometric; ++i)
        for (std::size_t j = 0; j < n * n; ++j) {
            auto lhs = module_inner(images[i], images[j]);
            auto rhs = tensor_inner_product(l, i / n, i % n, j / n, j % n);
            if (lhs != rhs) {
                rep.isometric = false;
                rep.witness = "inner products differ at pairs " + std::to_string(i) + ", " + std::to_string(j);
                break;
            }
        }

    rep.bimodule = true;
    for (std::size_t i = 0; i < n * n && rep.bimodule; ++i)
        for (std::size_t z = 0; z < n; ++z) {
            const std::size_t a = i / n, b = i % n;
            auto ez = indicator(n, {z});
            // Right action: Psi(xi e_z) = Psi(xi) alpha(e_z).
            Function right_lhs = b == z ? images[i] : Function(n, Rational(0));
            Function right_rhs = pointwise(images[i], alpha.apply(ez));
            // Left action: Psi(e_z xi) = e_z Psi(xi).
            Function left_lhs = a == z ? images[i] : Function(n, Rational(0));
            Function left_rhs = pointwise(ez, images[i]);
            if (right_lhs != right_rhs || left_lhs != left_rhs) {
                rep.bimodule = false;
                if (!rep.witness) rep.witness = "module actions differ at pair " + std::to_string(i);
                break;
            }
        }

    rep.module_dimension = rank(module_gram);
    rep.image_dimension = rank(psi.adjoint() * module_gram * psi);
    rep.gns_dimension = gns_correspondence(l).dimension();
    rep.surjective = rep.image_dimension == rep.module_dimension;
    return rep;
}

CompactFrame compact_operator_frame(const Correspondence& x)
{
    const std::size_t d = x.dimension();
    CompactFrame frame;
    frame.operator_dimension = d * d;
    std::vector<std::size_t> pair_index;
    for (auto p : x.surviving) pair_index.push_back(p.first * x.points + p.second);

    // Theta_{xi, eta}(zeta) = xi <eta, zeta>. With <xi_j, xi_k> = delta_jk c_j e_{y_j},
    // Theta_{xi_i, xi_j / c_j} sends xi_j to xi_i e_{y_j}.
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Matrix<Rational> theta(d, d);
            const Rational c = x.gram(pair_index[j], pair_index[j]);
            const std::size_t y = x.surviving[j].second;
            // <xi_j / c_j, xi_k> = delta_jk e_{y_j}; then act on the right of xi_i.
            theta(i, j) = (c / c) * x.right_action[y](i, i);
            frame.generators.push_back(std::move(theta));
        }

    auto flatten = [d](const Matrix<Rational>& m) {
        Function v(d * d);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) v[r * d + c] = m(r, c);
        return v;
    };
    std::vector<Function> rows;
    for (const auto& t : frame.generators) rows.push_back(flatten(t));
    frame.span_dimension = d == 0 ? 0 : rank(from_rows(rows, d * d));

    // Operators T with T R_z = R_z T for every right-action matrix R_z.
    std::vector<Function> equations;
    for (const auto& r : x.right_action)
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = 0; q < d; ++q) {
                Function eq(d * d, Rational(0));
                for (std::size_t k = 0; k < d; ++k) {
                    eq[p * d + k] += r(k, q);
                    eq[k * d + q] -= r(p, k);
                }
                if (std::any_of(eq.begin(), eq.end(), [](const Rational& v) { return sgn(v) != 0; }))
                    equations.push_back(std::move(eq));
            }
    auto commutant = equations.empty() ? std::vector<Function>{} : nullspace(from_rows(equations, d * d));
    frame.commutant_dimension = equations.empty() ? d * d : commutant.size();

    if (d > 0) {
        std::vector<Function> joint = rows;
        if (equations.empty())
            for (std::size_t k = 0; k < d * d; ++k) {
                Function e(d * d, Rational(0));
                e[k] = 1;
                joint.push_back(std::move(e));
            }
        else
            joint.insert(joint.end(), commutant.begin(), commutant.end());
        if (rank(from_rows(joint, d * d)) != frame.span_dimension || frame.span_dimension != frame.commutant_dimension)
            throw InvariantViolation("rank-one operators do not span the adjointable operators");
    }
    return frame;
}

}  // namespace cpcross
