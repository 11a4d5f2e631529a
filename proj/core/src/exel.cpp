#include "cpcross/exel.hpp"

#include "cpcross/error.hpp"

#include <algorithm>
#include <map>

namespace cpcross {

namespace {

// Calls visit on every path of length at most max_len that is comparable with p,
// i.e. a prefix of p or an extension of p.
template <class F>
void for_each_comparable(const Graph& g, const Path& p, std::size_t max_len, F&& visit)
{
    if (!p.is_vertex()) {
        visit(Path::vertex(p.range()));
        auto edges = p.edges();
        for (std::size_t k = 1; k < edges.size() && k <= max_len; ++k) visit(Path::from_edges(g, edges.first(k)));
    }
    if (p.length() > max_len) return;
    std::vector<Path> stack{p};
    while (!stack.empty()) {
        Path q = std::move(stack.back());
        stack.pop_back();
        visit(q);
        if (q.length() < max_len)
            for (auto e : g.received(q.source())) stack.push_back(q.append(g, e));
    }
}

}  // namespace

TransferIdentityReport verify_transfer_identity(const GraphPtr& g, const WeightSystem& lambda, std::size_t depth,
                                                const EndomorphismOverride& alpha_override)
{
    TransferIdentityReport rep;
    rep.depth = depth;
    const auto paths = paths_up_to(*g, depth);
    std::map<Path, std::size_t> index;
    for (std::size_t i = 0; i < paths.size(); ++i) index.emplace(paths[i], i);

    std::vector<DiagElement> projections;
    std::vector<DiagElement> alpha_images;
    std::vector<DiagElement> transfers;
    projections.reserve(paths.size());
    std::map<Path, std::vector<std::size_t>> alpha_owners;  // support path of alpha(q_nu) -> nu
    std::size_t alpha_len = 0;
    for (std::size_t j = 0; j < paths.size(); ++j) {
        projections.push_back(DiagElement::projection(g, paths[j]));
        alpha_images.push_back(alpha_override ? alpha_override(projections.back()) : alpha(projections.back()));
        transfers.push_back(transfer(projections.back(), lambda));
        for (const auto& [p, c] : alpha_images.back().terms()) {
            alpha_owners[p].push_back(j);
            alpha_len = std::max(alpha_len, p.length());
        }
    }

    // Both sides are products of cylinder projections. A pair is evaluated when
    // a support path of alpha(q_nu) meets mu or a support path of L(q_mu) meets
    // nu; every other pair has disjoint supports on both sides and reads 0 = 0.
    std::vector<std::size_t> stamp(paths.size(), paths.size());
    std::vector<std::size_t> partners;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        partners.clear();
        auto mark = [&](std::size_t j) {
            if (stamp[j] == i) return;
            stamp[j] = i;
            partners.push_back(j);
        };
        for (const auto& [mu, c] : projections[i].terms())
            for_each_comparable(*g, mu, alpha_len, [&](const Path& p) {
                if (auto it = alpha_owners.find(p); it != alpha_owners.end())
                    for (auto j : it->second) mark(j);
            });
        for (const auto& [t, c] : transfers[i].terms())
            for_each_comparable(*g, t, depth, [&](const Path& p) {
                if (auto it = index.find(p); it != index.end()) mark(it->second);
            });
        std::sort(partners.begin(), partners.end());
        rep.pairs_vanishing += paths.size() - partners.size();
        for (auto j : partners) {
            ++rep.pairs_checked;
            DiagElement lhs = transfer(multiply(projections[i], alpha_images[j]), lambda);
            DiagElement rhs = multiply(transfers[i], projections[j]);
            if (!equals(lhs, rhs)) {
                rep.passed = false;
                rep.witness = IdentityWitness{paths[i], paths[j], std::move(lhs), std::move(rhs)};
                return rep;
            }
        }
    }
    return rep;
}

namespace {

// c with a = c b, when a and b are proportional and b is nonzero.
std::optional<Rational> proportionality(const DiagElement& a, const DiagElement& b)
{
    std::size_t d = std::max(a.max_length(), b.max_length());
    auto na = normalize(a, d);
    auto nb = normalize(b, d);
    if (nb.empty() || na.terms().size() != nb.terms().size()) return std::nullopt;
    std::optional<Rational> c;
    for (const auto& [p, coeff] : nb.terms()) {
        auto other = na.coefficient(p);
        Rational ratio = other / coeff;
        if (c && *c != ratio) return std::nullopt;
        c = ratio;
    }
    return c;
}

DiagElement edge_projection_sum(const GraphPtr& g)
{
    DiagElement p(g);
    for (auto e : g->edges()) p.add_term(Path::edge(*g, e), Rational(1));
    return p;
}

// Rank of sparse rational rows by elimination on pivot columns.
std::size_t sparse_rank(std::vector<std::map<std::size_t, Rational>> rows)
{
    std::map<std::size_t, std::map<std::size_t, Rational>> pivots;  // leading column -> reduced row
    for (auto& row : rows) {
        while (!row.empty()) {
            auto lead = row.begin();
            auto it = pivots.find(lead->first);
            if (it == pivots.end()) {
                Rational inv = 1 / lead->second;
                for (auto& [c, v] : row) v *= inv;
                pivots.emplace(lead->first, std::move(row));
                break;
            }
            Rational f = lead->second;
            for (const auto& [c, v] : it->second) {
                Rational& x = row[c];
                x -= f * v;
                if (sgn(x) == 0) row.erase(c);
            }
        }
    }
    return pivots.size();
}

// alpha(D_d) inside D_{d+1} is hereditary when its dimension equals the size
// of its support.
bool range_is_hereditary(const GraphPtr& g, std::size_t depth)
{
    auto atoms = truncation_atoms(*g, depth);
    auto next_atoms = truncation_atoms(*g, depth + 1);
    std::vector<std::map<std::size_t, Rational>> images;
    std::vector<bool> support(next_atoms.size(), false);
    for (const auto& a : atoms) {
        const DiagElement image = normalize(alpha(DiagElement::projection(g, a)), depth + 1);
        std::map<std::size_t, Rational> row;
        for (const auto& [p, c] : image.terms()) {
            auto it = std::lower_bound(next_atoms.begin(), next_atoms.end(), p);
            if (it == next_atoms.end() || *it != p)
                throw InvariantViolation("alpha image " + p.str(*g) + " is not a depth-" + std::to_string(depth + 1) + " atom");
            if (sgn(c) == 0) continue;
            auto k = static_cast<std::size_t>(it - next_atoms.begin());
            support[k] = true;
            row.emplace(k, c);
        }
        images.push_back(std::move(row));
    }
    return sparse_rank(std::move(images)) == static_cast<std::size_t>(std::count(support.begin(), support.end(), true));
}

}  // namespace

SystemClassification classify_system(const GraphPtr& g, const WeightSystem& lambda, std::size_t depth)
{
    SystemClassification c;
    c.depth = depth;
    auto conditions = check_lambda_conditions(*g, lambda);
    c.emitter_sums = conditions.emitter_sums;

    c.regular_by_normalization = std::all_of(c.emitter_sums.begin(), c.emitter_sums.end(),
                                             [](const VertexSum& s) { return s.value == 1; });
    c.normalized_at_every_vertex = c.regular_by_normalization && c.emitter_sums.size() == g->vertex_count();

    auto transfer_report = verify_transfer_identity(g, lambda, depth);
    c.is_exel_system = transfer_report.passed;
    if (!c.is_exel_system) {
        const auto& w = *transfer_report.witness;
        c.witness = "L(q_mu alpha(q_nu)) != L(q_mu) q_nu at mu = " + w.mu.str(*g) + ", nu = " + w.nu.str(*g);
        c.witness_lhs = w.lhs;
        c.witness_rhs = w.rhs;
    }

    const auto paths = paths_up_to(*g, depth);
    c.regular_by_identity = true;
    for (const auto& mu : paths) {
        DiagElement a = alpha(DiagElement::projection(g, mu));
        DiagElement lhs = alpha(transfer(a, lambda));
        if (equals(lhs, a)) continue;
        c.regular_by_identity = false;
        if (!c.witness) {
            c.witness_path = mu;
            c.witness_factor = proportionality(lhs, a);
            c.witness_lhs = lhs;
            c.witness_rhs = a;
            c.witness = "alpha(L(alpha(q_" + mu.str(*g) + "))) != alpha(q_" + mu.str(*g) + ")";
            if (c.witness_factor)
                c.witness = "alpha(L(alpha(q_" + mu.str(*g) + "))) = " + to_string(*c.witness_factor) + " alpha(q_" +
                            mu.str(*g) + ")";
        }
        break;
    }
    if (c.regular_by_identity != c.regular_by_normalization)
        throw InvariantViolation("regularity by vertex normalization (" + std::string(c.regular_by_normalization ? "yes" : "no") +
                                 ") disagrees with alpha L alpha = alpha on the basis (" +
                                 (c.regular_by_identity ? "yes" : "no") + ")");
    c.is_regular = c.is_exel_system && c.regular_by_identity;

    const DiagElement p = edge_projection_sum(g);
    c.corner_identity = true;
    for (const auto& mu : paths) {
        DiagElement q = DiagElement::projection(g, mu);
        if (!equals(alpha(transfer(q, lambda)), multiply(p, multiply(q, p)))) {
            c.corner_identity = false;
            break;
        }
    }
    c.hereditary_range = range_is_hereditary(g, depth);
    c.is_corner = c.is_regular && c.corner_identity && c.hereditary_range;
    if (c.corner_identity != (c.is_regular && c.hereditary_range))
        throw InvariantViolation("corner identity disagrees with regular + hereditary range");
    if ((c.is_corner && !c.is_regular) || (c.is_regular && !c.is_exel_system))
        throw InvariantViolation("corner => regular => Exel chain broken");
    return c;
}

// ---------------------------------------------------------------------------

std::vector<Path> kernel_ideal_brute_force(const Graph& g, const WeightSystem& lambda)
{
    if (!g.is_acyclic()) throw PreconditionError("brute-force ideal enumeration needs a finite boundary (acyclic graph)");
    auto atlas = enumerate_boundary(g, 0);
    const auto& points = atlas.paths;
    const std::size_t n = points.size();
    auto index_of = [&](const Path& p) -> std::optional<std::size_t> {
        auto it = std::lower_bound(points.begin(), points.end(), p);
        if (it == points.end() || *it != p) return std::nullopt;
        return static_cast<std::size_t>(it - points.begin());
    };
    // (L f)(mu) = sum over e with e mu on the boundary of lambda_e f(e mu).
    auto apply_transfer = [&](const Function& f) {
        Function out(n, Rational(0));
        for (std::size_t i = 0; i < n; ++i)
            for (auto e : g.emitted(points[i].range()))
                if (auto j = index_of(points[i].prepend(g, e))) out[i] += lambda[e] * f[*j];
        return out;
    };
    auto killed = [&](const std::vector<std::size_t>& s) {
        auto image = apply_transfer(indicator(n, s));
        return std::all_of(image.begin(), image.end(), [](const Rational& q) { return sgn(q) == 0; });
    };

    std::vector<std::size_t> best;
    if (n <= 16) {
        // L is positive, so chi_S in ker L means the whole ideal chi_S A is.
        std::vector<std::vector<std::size_t>> valid;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            std::vector<std::size_t> s;
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1U) s.push_back(i);
            if (killed(s)) {
                if (s.size() > best.size()) best = s;
                valid.push_back(std::move(s));
            }
        }
        for (const auto& s : valid)
            if (!std::includes(best.begin(), best.end(), s.begin(), s.end()))
                throw InvariantViolation("kernel ideals are not dominated by a largest one");
    } else {
        for (std::size_t i = 0; i < n; ++i)
            if (killed({i})) best.push_back(i);
        if (!killed(best)) throw InvariantViolation("union of kernel points is not in the kernel");
    }
    std::vector<Path> out;
    for (auto i : best) out.push_back(points[i]);
    return out;
}

IdealReport compute_ideals(const GraphPtr& g, const WeightSystem& lambda, std::size_t depth)
{
    IdealReport rep;
    rep.depth = depth;
    rep.depth_relative = !g->is_acyclic();
    for (const auto& p : paths_up_to(*g, depth)) {
        bool source_vertex = p.is_vertex() && g->is_source(p.range());
        (source_vertex ? rep.n_l : rep.n_l_perp).push_back(p);
        rep.j_xl.push_back(p);  // no infinite receivers in a finite graph
        if (!p.is_vertex()) rep.intersection.push_back(p);
    }

    for (const auto& a : rep.n_l)
        for (const auto& b : rep.n_l_perp)
            if (!multiply(DiagElement::projection(g, a), DiagElement::projection(g, b)).empty())
                throw InvariantViolation("N_L and its annihilator have a nonzero product at " + a.str(*g) + ", " +
                                         b.str(*g));

    if (g->is_acyclic()) {
        rep.brute_force_kernel = kernel_ideal_brute_force(*g, lambda);
        rep.brute_force_checked = true;
        // Source vertices are exactly the boundary points q_v picks out.
        if (rep.brute_force_kernel != rep.n_l)
            throw InvariantViolation("closed-form N_L disagrees with brute-force ideal enumeration");
    }
    return rep;
}

CovarianceSpanReport covariance_span_check(const GraphPtr& g, std::size_t depth)
{
    if (depth == 0) throw PreconditionError("covariance span check needs depth >= 1");
    CovarianceSpanReport rep;
    rep.depth = depth;
    auto atoms = truncation_atoms(*g, depth);
    const auto shorter = paths_up_to(*g, depth - 1);
    const auto all = paths_up_to(*g, depth);

    std::vector<Function> products;
    for (const auto& mu : shorter) {
        DiagElement a = alpha(DiagElement::projection(g, mu));
        for (const auto& nu : all) {
            auto coords = atom_coordinates(multiply(a, DiagElement::projection(g, nu)), atoms, depth);
            if (std::any_of(coords.begin(), coords.end(), [](const Rational& q) { return sgn(q) != 0; }))
                products.push_back(std::move(coords));
        }
    }
    std::vector<Function> generators;
    for (const auto& eta : all)
        if (!eta.is_vertex()) generators.push_back(atom_coordinates(DiagElement::projection(g, eta), atoms, depth));

    auto dim = [&](const std::vector<Function>& rows) {
        return rows.empty() ? std::size_t{0} : rank(from_rows(rows, atoms.size()));
    };
    rep.products_dimension = dim(products);
    rep.generators_dimension = dim(generators);
    std::vector<Function> joint = products;
    joint.insert(joint.end(), generators.begin(), generators.end());
    rep.joint_dimension = dim(joint);
    rep.equal = rep.products_dimension == rep.joint_dimension && rep.generators_dimension == rep.joint_dimension;
    return rep;
}

PositiveMapMatrix truncated_transfer_matrix(const GraphPtr& g, const WeightSystem& lambda, std::size_t depth)
{
    auto atoms = truncation_atoms(*g, depth);
    Matrix<Rational> m(atoms.size(), atoms.size());
    for (std::size_t y = 0; y < atoms.size(); ++y) {
        auto coords = atom_coordinates(transfer(DiagElement::projection(g, atoms[y]), lambda), atoms, depth);
        for (std::size_t x = 0; x < atoms.size(); ++x) m(x, y) = coords[x];
    }
    return PositiveMapMatrix(std::move(m));
}

// ---------------------------------------------------------------------------

namespace {

// Assigns each MD block to "zero" (-1) or to one of the groups 0..k-1, with
// groups numbered in order of first use.
void for_each_grouping(std::size_t blocks, const std::function<void(const std::vector<int>&, int)>& visit)
{
    std::vector<int> label(blocks, -1);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int groups) {
        if (i == blocks) {
            visit(label, groups);
            return;
        }
        for (int l = -1; l <= groups; ++l) {
            label[i] = l;
            rec(i + 1, l == groups ? groups + 1 : groups);
        }
    };
    rec(0, 0);
}

}  // namespace

RegularEnumeration enumerate_regular_endomorphisms(const PositiveMapMatrix& l)
{
    const std::size_t n = l.size();
    if (n > 8) throw PreconditionError("regular endomorphism enumeration is limited to 8 points");
    RegularEnumeration out;

    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (sgn(l(x, y)) != 0) {
                out.image_support.push_back(x);
                break;
            }
    const std::size_t image_rank = rank(l.matrix());
    out.multiplicative_domain = multiplicative_domain(l).subalgebra;
    if (image_rank != out.image_support.size()) {
        out.reason = "L(A) is not an ideal: rank " + std::to_string(image_rank) + " on a support of " +
                     std::to_string(out.image_support.size()) + " points";
        return out;
    }
    out.image_is_ideal = true;

    const auto& md_blocks = out.multiplicative_domain.blocks();
    const Function chi_image = indicator(n, out.image_support);
    for_each_grouping(md_blocks.size(), [&](const std::vector<int>& label, int groups) {
        if (static_cast<std::size_t>(groups) != image_rank) return;
        std::vector<std::vector<std::size_t>> unions(groups);
        for (std::size_t b = 0; b < md_blocks.size(); ++b)
            if (label[b] >= 0) unions[label[b]].insert(unions[label[b]].end(), md_blocks[b].begin(), md_blocks[b].end());
        std::vector<Function> images;
        for (const auto& u : unions) images.push_back(l.apply(indicator(n, u)));
        if (!images.empty() && rank(from_rows(images, n)) != images.size()) return;

        // theta(e_x) = chi_U for the group whose image is e_x; other groupings
        // are not sections of L.
        std::vector<std::optional<std::size_t>> tau(n);
        for (std::size_t j = 0; j < unions.size(); ++j) {
            std::optional<std::size_t> target;
            for (std::size_t x = 0; x < n; ++x) {
                if (sgn(images[j][x]) == 0) continue;
                if (images[j][x] != 1 || target) return;
                target = x;
            }
            if (!target || sgn(chi_image[*target]) == 0) throw InvariantViolation("section leaves L(A)");
            for (auto p : unions[j]) tau[p] = *target;
        }
        Endomorphism alpha(std::move(tau));
        auto check = check_transfer_pair(alpha, l);
        if (!check.is_exel || !check.is_regular)
            throw InvariantViolation("enumerated endomorphism fails the regular transfer identity");
        RegularEndomorphism r{alpha, alpha.range(), check.is_corner, false};
        r.transfer_faithful_on_generated_ideal = faithfulness_report(l, r.range.support()).faithful;
        out.endomorphisms.push_back(std::move(r));
    });
    if (out.endomorphisms.empty()) out.reason = "no subalgebra of MD(L) maps bijectively onto L(A)";
    std::sort(out.endomorphisms.begin(), out.endomorphisms.end(),
              [](const RegularEndomorphism& a, const RegularEndomorphism& b) {
                  return a.alpha.point_map() < b.alpha.point_map();
              });
    return out;
}

TruncatedDomain multiplicative_domain_truncated(const GraphPtr& g, const WeightSystem& lambda, std::size_t depth)
{
    TruncatedDomain out;
    out.depth = depth;
    out.atoms = truncation_atoms(*g, depth);
    const auto wide = truncation_atoms(*g, depth + 1);
    const std::size_t n = out.atoms.size();

    std::vector<DiagElement> transfers;
    for (const auto& a : out.atoms) transfers.push_back(transfer(DiagElement::projection(g, a), lambda));

    // For each test atom b and coordinate k: sum_i c_i [L(b a_i) - L(b) L(a_i)]_k = 0.
    std::vector<Function> rows;
    for (const auto& b_path : wide) {
        DiagElement b = DiagElement::projection(g, b_path);
        DiagElement lb = transfer(b, lambda);
        std::vector<Function> columns;
        for (std::size_t i = 0; i < n; ++i) {
            DiagElement defect = transfer(multiply(b, DiagElement::projection(g, out.atoms[i])), lambda) -
                                 multiply(lb, transfers[i]);
            columns.push_back(atom_coordinates(defect, out.atoms, depth));
        }
        for (std::size_t k = 0; k < n; ++k) {
            Function row(n);
            bool nonzero = false;
            for (std::size_t i = 0; i < n; ++i) {
                row[i] = columns[i][k];
                nonzero = nonzero || sgn(row[i]) != 0;
            }
            if (nonzero) rows.push_back(std::move(row));
        }
    }
    auto solutions = rows.empty() ? Subalgebra::whole(n).basis() : nullspace(from_rows(rows, n));
    auto sub = subalgebra_from_span(n, solutions);
    if (!sub) throw InvariantViolation("truncated multiplicative domain is not closed under products");
    out.subalgebra = *sub;
    for (const auto& block : out.subalgebra.blocks()) {
        DiagElement e(g);
        for (auto i : block) e.add_term(out.atoms[i], Rational(1));
        out.basis.push_back(std::move(e));
    }
    if (classify_system(g, lambda, depth).is_corner) {
        out.corner_closed_form_checked = true;
        if (out.subalgebra != Subalgebra::whole(n))
            throw InvariantViolation("corner system: multiplicative domain is not pAp + (1-p)A(1-p)");
    }
    return out;
}

}  // namespace cpcross
