#include "cpcross/rep.hpp"

#include "cpcross/error.hpp"
#include "cpcross/exel.hpp"

#include <algorithm>
#include <set>

namespace cpcross {

std::optional<std::size_t> MatrixRep::index_of(const Path& path) const
{
    auto it = std::lower_bound(basis.begin(), basis.end(), path);
    if (it == basis.end() || *it != path) return std::nullopt;
    return static_cast<std::size_t>(it - basis.begin());
}

Matrix<Rational> MatrixRep::pi(const DiagElement& a) const
{
    if (a.graph_ptr() != graph) throw PreconditionError("diagonal element belongs to another graph");
    std::vector<Rational> d;
    d.reserve(basis.size());
    for (const auto& x : basis) d.push_back(evaluate(a, x));
    return Matrix<Rational>::diagonal(d);
}

Matrix<Rational> MatrixRep::s_path(const Path& mu) const
{
    if (mu.is_vertex()) return p.at(mu.range().index);
    Matrix<Rational> m = Matrix<Rational>::identity(dimension());
    for (auto e : mu.edges()) m = m * s.at(e.index);
    return m;
}

namespace {

void fill_family(MatrixRep& rep)
{
    const Graph& g = *rep.graph;
    const std::size_t n = rep.basis.size();
    for (auto e : g.edges()) {
        Matrix<Rational> m(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            if (g.source(e) != rep.basis[j].range()) continue;
            if (auto i = rep.index_of(rep.basis[j].prepend(g, e))) m(*i, j) = 1;
        }
        rep.s.push_back(std::move(m));
    }
    for (auto v : g.vertices()) {
        std::vector<Rational> d;
        for (const auto& x : rep.basis) d.emplace_back(x.range() == v ? 1 : 0);
        rep.p.push_back(Matrix<Rational>::diagonal(d));
    }
}

RelationDefect measure(std::string relation, const Matrix<Rational>& d, const std::vector<bool>& frontier)
{
    RelationDefect out;
    out.relation = std::move(relation);
    out.max_abs = d.max_abs();
    Rational hs = 0;
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j) {
            if (sgn(d(i, j)) == 0) continue;
            hs += d(i, j) * d(i, j);
            if (!frontier[i] && !frontier[j]) out.on_frontier = false;
        }
    out.normalized_hs = d.rows() == 0 ? Rational(0) : canonical(hs / Rational(d.rows()));
    return out;
}

}  // namespace

std::vector<RelationDefect> cuntz_krieger_defects(const MatrixRep& rep)
{
    const Graph& g = *rep.graph;
    std::vector<bool> frontier(rep.dimension(), false);
    for (auto i : rep.frontier) frontier[i] = true;
    std::vector<RelationDefect> out;
    std::vector<Matrix<Rational>> ranges;
    for (auto e : g.edges()) ranges.push_back(rep.s[e.index] * rep.s[e.index].adjoint());

    for (auto e : g.edges()) {
        const auto& se = rep.s[e.index];
        const std::string name = g.name(e);
        out.push_back(measure("S_" + name + "^* S_" + name + " = P_" + g.name(g.source(e)),
                              se.adjoint() * se - rep.p[g.source(e).index], frontier));
        out.push_back(measure("S_" + name + " S_" + name + "^* <= P_" + g.name(g.range(e)),
                              rep.p[g.range(e).index] * ranges[e.index] - ranges[e.index], frontier));
    }
    for (auto e : g.edges())
        for (auto f : g.edges())
            if (e < f)
                out.push_back(measure("S_" + g.name(e) + "^* S_" + g.name(f) + " = 0",
                                      rep.s[e.index].adjoint() * rep.s[f.index], frontier));
    for (auto v : g.vertices()) {
        if (g.is_source(v)) continue;
        Matrix<Rational> d = rep.p[v.index];
        for (auto e : g.received(v)) d -= ranges[e.index];
        out.push_back(measure("P_" + g.name(v) + " = sum_{r(e)=" + g.name(v) + "} S_e S_e^*", d, frontier));
    }
    return out;
}

MatrixRep boundary_representation(const GraphPtr& g)
{
    if (!g->is_acyclic())
        throw PreconditionError("graph has a cycle, so its boundary is infinite; use truncated_representation");
    MatrixRep rep;
    rep.graph = g;
    rep.basis = enumerate_boundary(*g, 0).paths;
    fill_family(rep);
    rep.defects = cuntz_krieger_defects(rep);
    for (const auto& d : rep.defects)
        if (d.max_abs != 0) throw InvariantViolation("boundary representation violates " + d.relation);
    return rep;
}

MatrixRep truncated_representation(const GraphPtr& g, std::size_t depth)
{
    const Graph& graph = *g;
    // Vertices downstream of a cycle admit infinitely long paths into them.
    std::vector<bool> downstream(graph.vertex_count(), false);
    {
        // A vertex lies on a cycle when it can reach itself.
        std::vector<VertexId> stack;
        for (auto v : graph.vertices()) {
            std::vector<bool> seen(graph.vertex_count(), false);
            stack.assign({v});
            bool cyclic = false;
            while (!stack.empty() && !cyclic) {
                auto x = stack.back();
                stack.pop_back();
                for (auto e : graph.emitted(x)) {
                    auto y = graph.range(e);
                    if (y == v) cyclic = true;
                    if (!seen[y.index]) {
                        seen[y.index] = true;
                        stack.push_back(y);
                    }
                }
            }
            if (cyclic) {
                downstream[v.index] = true;
                for (std::size_t i = 0; i < seen.size(); ++i)
                    if (seen[i]) downstream[i] = true;
            }
        }
    }

    MatrixRep rep;
    rep.graph = g;
    rep.depth = depth;
    for (const auto& p : paths_up_to(graph, depth))
        if (graph.is_source(p.source()) || downstream[p.source().index]) rep.basis.push_back(p);
    for (std::size_t i = 0; i < rep.basis.size(); ++i) {
        const auto& x = rep.basis[i];
        if (x.length() == depth || (x.is_vertex() && !graph.is_source(x.range()))) rep.frontier.push_back(i);
    }
    fill_family(rep);
    rep.defects = cuntz_krieger_defects(rep);
    rep.exact = std::all_of(rep.defects.begin(), rep.defects.end(), [](const auto& d) { return d.max_abs == 0; });
    if (graph.is_acyclic() && rep.exact) rep.frontier.clear();
    return rep;
}

// ---------------------------------------------------------------------------

std::string UOperator::mode() const
{
    return exact() ? (radicand == 1 ? "exact (rational)" : "exact (Q(sqrt " + std::to_string(radicand) + "))")
                   : "float128";
}

std::optional<std::pair<Rational, unsigned long>> exact_square_root(const Rational& q)
{
    if (sgn(q) <= 0) return std::nullopt;
    // sqrt(p/d) = sqrt(p d) / d.
    mpz_class pd = q.get_num() * q.get_den();
    if (pd > mpz_class("1000000000000")) return std::nullopt;
    unsigned long m = pd.get_ui();
    unsigned long square_part = 1;
    unsigned long free_part = 1;
    for (unsigned long f = 2; f * f <= m; ++f) {
        unsigned long count = 0;
        while (m % f == 0) {
            m /= f;
            ++count;
        }
        for (unsigned long k = 0; k < count / 2; ++k) square_part *= f;
        if (count % 2) free_part *= f;
    }
    free_part *= m;
    Rational c(mpz_class(square_part), q.get_den());
    c.canonicalize();
    return std::make_pair(c, free_part);
}

namespace {

template <class T>
bool idempotent(const Matrix<T>& m)
{
    Matrix<T> sq = m * m;
    if constexpr (ScalarTraits<T>::exact) {
        return sq == m;
    } else {
        long double scale = std::max<long double>(m.max_abs(), 1);
        return (sq - m).max_abs() / scale <= kFloatRelativeTolerance;
    }
}

}  // namespace

UOperator build_u(const MatrixRep& rep, const WeightSystem& lambda, bool force_float)
{
    const Graph& g = *rep.graph;
    if (lambda.size() != g.edge_count()) throw PreconditionError("weight system does not match graph");
    const std::size_t n = rep.dimension();
    UOperator u;

    std::vector<std::pair<Rational, unsigned long>> roots;
    std::set<unsigned long> radicands;
    bool exact_ok = !force_float;
    for (auto e : g.edges()) {
        if (!exact_ok) break;
        auto r = exact_square_root(lambda[e]);
        if (!r) {
            exact_ok = false;
            break;
        }
        if (r->second != 1) radicands.insert(r->second);
        roots.push_back(*r);
    }
    if (radicands.size() > 1) exact_ok = false;

    if (exact_ok) {
        u.radicand = radicands.empty() ? 1 : *radicands.begin();
        Matrix<QuadraticSurd> m(n, n);
        for (auto e : g.edges()) {
            const auto& [c, r] = roots[e.index];
            QuadraticSurd coeff = r == 1 ? QuadraticSurd(c) : QuadraticSurd(Rational(0), c, r);
            m += convert<QuadraticSurd>(rep.s[e.index]) * coeff;
        }
        u.partial_isometry = idempotent(m.adjoint() * m);
        u.matrix = std::move(m);
    } else {
        Matrix<Float128> m(n, n);
        for (auto e : g.edges()) m += convert<Float128>(rep.s[e.index]) * sqrtq(to_float128(lambda[e]));
        u.partial_isometry = idempotent(m.adjoint() * m);
        u.matrix = std::move(m);
    }

    u.normalized = true;
    for (const auto& s : check_lambda_conditions(g, lambda).emitter_sums) u.normalized = u.normalized && s.value == 1;
    if (u.partial_isometry != u.normalized)
        throw InvariantViolation("u^* u idempotent (" + std::string(u.partial_isometry ? "yes" : "no") +
                                 ") disagrees with per-vertex normalization (" + (u.normalized ? "yes" : "no") + ")");
    return u;
}

// ---------------------------------------------------------------------------

bool RepresentationReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.skipped || c.passed; });
}

namespace {

template <class T>
void record(IdentityCheck& check, const Matrix<T>& lhs, const Matrix<T>& rhs, const std::string& instance)
{
    ++check.instances;
    long double diff = (lhs - rhs).max_abs();
    long double scale = std::max(lhs.max_abs(), rhs.max_abs());
    long double residual = scale > 0 ? diff / scale : diff;
    bool ok;
    if constexpr (ScalarTraits<T>::exact)
        ok = lhs == rhs;
    else
        ok = residual <= kFloatRelativeTolerance;
    check.residual = std::max(check.residual, residual);
    if (!ok && check.passed) {
        check.passed = false;
        check.witness = instance;
    }
}

template <class T>
RepresentationReport verify_with(const MatrixRep& rep, const WeightSystem& lambda, std::size_t depth,
                                 const VerifyOptions& options, const Matrix<T>& u)
{
    const GraphPtr& g = rep.graph;
    const WeightSystem& transfer_weights = options.transfer_weights ? *options.transfer_weights : lambda;
    RepresentationReport report;
    report.mode = ScalarTraits<T>::exact ? "exact" : "float128";
    report.exact_basis = rep.exact;

    auto pi = [&](const DiagElement& a) { return convert<T>(rep.pi(a)); };
    const Matrix<T> u_adj = u.adjoint();
    // In a truncated window u pushes paths of full length out of the basis, so
    // identities are read on the paths shorter than the window.
    Matrix<T> q = Matrix<T>::identity(rep.dimension());
    if (rep.depth) {
        report.interior_only = true;
        for (std::size_t i = 0; i < rep.dimension(); ++i)
            if (rep.basis[i].length() >= *rep.depth) q(i, i) = T(0);
    }
    auto compressed = [&](const Matrix<T>& m) { return rep.depth ? Matrix<T>(q * m * q) : m; };
    IdentityCheck transfer_check;
    transfer_check.name = "u^* pi(a) u = pi(L(a))";
    IdentityCheck intertwining;
    intertwining.name = "u pi(a) = pi(alpha(a)) u";
    IdentityCheck recovery;
    recovery.name = "pi(q_mu) = lambda_{mu_1}^{-1} pi(q_{mu_1}) u pi(q_{sigma(mu)}) u^* pi(q_{mu_1})";
    IdentityCheck corner;
    corner.name = "u pi(a) u^* = pi(alpha(a))";

    bool is_corner = classify_system(g, lambda, depth).is_corner;
    corner.skipped = !is_corner;

    for (const auto& mu : paths_up_to(*g, depth)) {
        const DiagElement a = DiagElement::projection(g, mu);
        const Matrix<T> pa = pi(a);
        const std::string at = "a = q_" + mu.str(*g);
        record(transfer_check, compressed(u_adj * pa * u), compressed(pi(transfer(a, transfer_weights))), at);
        const DiagElement alpha_a = alpha(a);
        record(intertwining, compressed(u * pa), compressed(pi(alpha_a) * u), at);
        if (!mu.is_vertex()) {
            const EdgeId first = mu.first_edge();
            const Matrix<T> head = pi(DiagElement::projection(g, Path::edge(*g, first)));
            const Matrix<T> tail = pi(DiagElement::projection(g, shift(*g, mu)));
            const T inv = T(1) / ScalarTraits<T>::from(lambda[first]);
            record(recovery, compressed(pa), compressed(head * u * tail * u_adj * head * inv), "mu = " + mu.str(*g));
        }
        if (is_corner) record(corner, compressed(u * pa * u_adj), compressed(pi(alpha_a)), at);
    }
    report.checks = {transfer_check, intertwining, recovery, corner};
    return report;
}

}  // namespace

RepresentationReport verify_representation(const MatrixRep& rep, const WeightSystem& lambda, std::size_t depth,
                                           const VerifyOptions& options)
{
    UOperator u = build_u(rep, lambda, options.force_float);
    if (u.exact()) return verify_with(rep, lambda, depth, options, std::get<Matrix<QuadraticSurd>>(u.matrix));
    return verify_with(rep, lambda, depth, options, std::get<Matrix<Float128>>(u.matrix));
}

RepresentationReport verify_representation_strict(const MatrixRep& rep, const WeightSystem& lambda, std::size_t depth)
{
    auto report = verify_representation(rep, lambda, depth);
    for (const auto& c : report.checks)
        if (!c.skipped && !c.passed)
            throw InvariantViolation("representation identity \"" + c.name + "\" fails at " + c.witness.value_or("?"));
    return report;
}

// ---------------------------------------------------------------------------

int gauge_degree(const GaugeTerm& t)
{
    int d = 0;
    for (const auto& tok : t.tokens) {
        if (tok == "u" || tok == "S")
            ++d;
        else if (tok == "u*" || tok == "S*")
            --d;
        else if (tok != "pi" && tok != "P" && tok != "0")
            throw InputError("unknown gauge token \"" + tok + "\"");
    }
    return d;
}

std::vector<GaugeIdentity> verified_identity_list()
{
    return {
        {"S_e^* S_e = P_{s(e)}", {{"S*", "S"}}, {{"P"}}},
        {"S_e S_e^* <= P_{r(e)}", {{"P", "S", "S*"}}, {{"S", "S*"}}},
        {"S_e^* S_f = 0", {{"S*", "S"}}, {{"0"}}},
        {"P_v = sum S_e S_e^*", {{"P"}}, {{"S", "S*"}}},
        {"u^* pi(a) u = pi(L(a))", {{"u*", "pi", "u"}}, {{"pi"}}},
        {"u pi(a) = pi(alpha(a)) u", {{"u", "pi"}}, {{"pi", "u"}}},
        {"pi(q_mu) = lambda^{-1} pi u pi u^* pi", {{"pi"}}, {{"pi", "u", "pi", "u*", "pi"}}},
        {"u pi(a) u^* = pi(alpha(a))", {{"u", "pi", "u*"}}, {{"pi"}}},
    };
}

bool gauge_scaling_holds(const MatrixRep& rep)
{
    std::vector<Rational> d, d_inv;
    for (const auto& x : rep.basis) {
        mpz_class two_power;
        mpz_ui_pow_ui(two_power.get_mpz_t(), 2, x.length());
        d.emplace_back(two_power);
        d_inv.push_back(canonical(Rational(1) / Rational(two_power)));
    }
    auto dm = Matrix<Rational>::diagonal(d);
    auto dm_inv = Matrix<Rational>::diagonal(d_inv);
    for (const auto& s : rep.s)
        if (!(dm * s * dm_inv == s * Rational(2))) return false;
    for (const auto& p : rep.p)
        if (!(dm * p * dm_inv == p)) return false;
    return true;
}

RepPair<QuadraticSurd> boundary_pair(const MatrixRep& rep, const WeightSystem& lambda)
{
    if (!rep.exact || !rep.graph->is_acyclic()) throw PreconditionError("boundary pair needs an exact acyclic representation");
    UOperator u = build_u(rep, lambda);
    if (!u.exact()) throw PreconditionError("weights need float mode; redundancy tests require exact arithmetic");
    RepPair<QuadraticSurd> pair;
    const std::size_t n = rep.dimension();
    for (std::size_t i = 0; i < n; ++i) {
        Matrix<QuadraticSurd> e(n, n);
        e(i, i) = 1;
        pair.atom_images.push_back(std::move(e));
    }
    pair.s = std::get<Matrix<QuadraticSurd>>(u.matrix);
    return pair;
}

std::vector<EdgeCovarianceCheck> edge_covariance_checks(const MatrixRep& rep)
{
    if (!rep.exact || rep.depth) throw PreconditionError("covariance checks need an exact boundary representation");
    const Graph& g = *rep.graph;
    const std::size_t n = rep.dimension();
    RepPair<Rational> pair;
    for (std::size_t i = 0; i < n; ++i) {
        Matrix<Rational> e(n, n);
        e(i, i) = 1;
        pair.atom_images.push_back(std::move(e));
    }
    std::vector<EdgeCovarianceCheck> out;
    for (auto e : g.edges()) {
        std::vector<std::optional<std::size_t>> tau(n);
        std::vector<std::size_t> cylinder;
        for (std::size_t j = 0; j < n; ++j) {
            const Path& y = rep.basis[j];
            if (g.source(e) == y.range()) tau[j] = rep.index_of(y.prepend(g, e));
            if (!y.is_vertex() && y.first_edge() == e) cylinder.push_back(j);
        }
        pair.s = rep.s[e.index];
        Endomorphism beta(std::move(tau));
        auto report = endo_covariance_ideal(pair, beta);
        bool is_cylinder = report.ideal == cylinder;
        out.push_back({g.name(e), std::move(beta), std::move(report), is_cylinder});
    }
    return out;
}

}  // namespace cpcross
