#include "cpcross/graph.hpp"

#include "cpcross/error.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>

namespace cpcross {

Graph::Graph(std::vector<std::string> vertices, std::vector<EdgeSpec> edges)
{
    std::sort(vertices.begin(), vertices.end());
    if (auto dup = std::adjacent_find(vertices.begin(), vertices.end()); dup != vertices.end())
        throw InputError("duplicate vertex \"" + *dup + "\"");
    for (const auto& v : vertices)
        if (v.empty()) throw InputError("empty vertex name");
    vertex_names_ = std::move(vertices);

    std::sort(edges.begin(), edges.end(), [](const EdgeSpec& a, const EdgeSpec& b) { return a.id < b.id; });
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (edges[i].id == edges[i + 1].id) throw InputError("duplicate edge id \"" + edges[i].id + "\"");

    emitted_.resize(vertex_names_.size());
    received_.resize(vertex_names_.size());
    for (std::uint32_t k = 0; k < edges.size(); ++k) {
        const auto& spec = edges[k];
        if (spec.id.empty()) throw InputError("empty edge id");
        auto s = find_vertex(spec.src);
        auto r = find_vertex(spec.rng);
        if (!s || !r) {
            const std::string& missing = s ? spec.rng : spec.src;
            throw InputError("dangling endpoint: edge \"" + spec.id + "\" references unknown vertex \"" + missing + "\"");
        }
        edge_names_.push_back(spec.id);
        src_.push_back(*s);
        rng_.push_back(*r);
        emitted_[s->index].push_back(EdgeId{k});
        received_[r->index].push_back(EdgeId{k});
    }

    // Kahn's algorithm on the edge relation.
    std::vector<std::size_t> indegree(vertex_count(), 0);
    for (const auto& r : rng_) ++indegree[r.index];
    std::vector<std::uint32_t> ready;
    for (std::uint32_t v = 0; v < vertex_count(); ++v)
        if (indegree[v] == 0) ready.push_back(v);
    std::size_t visited = 0;
    while (!ready.empty()) {
        auto v = ready.back();
        ready.pop_back();
        ++visited;
        for (auto e : emitted_[v])
            if (--indegree[rng_[e.index].index] == 0) ready.push_back(rng_[e.index].index);
    }
    acyclic_ = visited == vertex_count();
}

std::optional<VertexId> Graph::find_vertex(const std::string& name) const
{
    auto it = std::lower_bound(vertex_names_.begin(), vertex_names_.end(), name);
    if (it == vertex_names_.end() || *it != name) return std::nullopt;
    return VertexId{static_cast<std::uint32_t>(it - vertex_names_.begin())};
}

std::optional<EdgeId> Graph::find_edge(const std::string& name) const
{
    auto it = std::lower_bound(edge_names_.begin(), edge_names_.end(), name);
    if (it == edge_names_.end() || *it != name) return std::nullopt;
    return EdgeId{static_cast<std::uint32_t>(it - edge_names_.begin())};
}

VertexId Graph::vertex(const std::string& name) const
{
    auto v = find_vertex(name);
    if (!v) throw InputError("unknown vertex \"" + name + "\"");
    return *v;
}

EdgeId Graph::edge(const std::string& name) const
{
    auto e = find_edge(name);
    if (!e) throw InputError("unknown edge \"" + name + "\"");
    return *e;
}

std::vector<VertexId> Graph::vertices() const
{
    std::vector<VertexId> out(vertex_count());
    for (std::uint32_t i = 0; i < out.size(); ++i) out[i] = VertexId{i};
    return out;
}

std::vector<EdgeId> Graph::edges() const
{
    std::vector<EdgeId> out(edge_count());
    for (std::uint32_t i = 0; i < out.size(); ++i) out[i] = EdgeId{i};
    return out;
}

// ---------------------------------------------------------------------------

Path Path::edge(const Graph& g, EdgeId e)
{
    return Path(g.range(e), g.source(e), EdgeList{e});
}

Path Path::from_edges(const Graph& g, std::span<const EdgeId> edges)
{
    if (edges.empty()) throw PreconditionError("edge list is empty; use Path::vertex");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (g.source(edges[i]) != g.range(edges[i + 1]))
            throw InputError("edges \"" + g.name(edges[i]) + "\" and \"" + g.name(edges[i + 1]) +
                             "\" do not compose");
    return Path(g.range(edges.front()), g.source(edges.back()), EdgeList(edges.begin(), edges.end()));
}

EdgeId Path::first_edge() const
{
    if (edges_.empty()) throw PreconditionError("vertex path has no first edge");
    return edges_.front();
}

Path Path::prepend(const Graph& g, EdgeId e) const
{
    if (g.source(e) != range_) throw PreconditionError("prepend: s(e) != r(mu)");
    EdgeList edges;
    edges.reserve(edges_.size() + 1);
    edges.push_back(e);
    edges.insert(edges.end(), edges_.begin(), edges_.end());
    return Path(g.range(e), source_, std::move(edges));
}

Path Path::append(const Graph& g, EdgeId e) const
{
    if (g.range(e) != source_) throw PreconditionError("append: r(e) != s(mu)");
    EdgeList edges = edges_;
    edges.push_back(e);
    return Path(range_, g.source(e), std::move(edges));
}

bool Path::is_prefix_of(const Path& other) const
{
    if (range_ != other.range_ || edges_.size() > other.edges_.size()) return false;
    return std::equal(edges_.begin(), edges_.end(), other.edges_.begin());
}

std::vector<std::string> Path::edge_names(const Graph& g) const
{
    std::vector<std::string> out;
    for (auto e : edges_) out.push_back(g.name(e));
    return out;
}

std::string Path::str(const Graph& g) const
{
    if (edges_.empty()) return g.name(range_);
    std::string s;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (i) s += '.';
        s += g.name(edges_[i]);
    }
    return s;
}

std::strong_ordering operator<=>(const Path& a, const Path& b)
{
    if (auto c = a.edges_.size() <=> b.edges_.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.edges_.size(); ++i)
        if (auto c = a.edges_[i] <=> b.edges_[i]; c != 0) return c;
    if (auto c = a.range_ <=> b.range_; c != 0) return c;
    return a.source_ <=> b.source_;
}

Path shift(const Graph& g, const Path& p)
{
    if (p.is_vertex()) throw PreconditionError("shift undefined on length-0 path");
    if (p.length() == 1) return Path::vertex(g.source(p.edges_.front()));
    Path::EdgeList rest(p.edges_.begin() + 1, p.edges_.end());
    return Path(g.range(rest.front()), p.source_, std::move(rest));
}

std::vector<Path> paths_of_length(const Graph& g, std::size_t n)
{
    std::vector<Path> layer;
    for (auto v : g.vertices()) layer.push_back(Path::vertex(v));
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Path> next;
        for (const auto& p : layer)
            for (auto e : g.received(p.source())) next.push_back(p.append(g, e));
        layer = std::move(next);
    }
    std::sort(layer.begin(), layer.end());
    return layer;
}

std::vector<Path> paths_up_to(const Graph& g, std::size_t n)
{
    std::vector<Path> out;
    std::vector<Path> layer;
    for (auto v : g.vertices()) layer.push_back(Path::vertex(v));
    for (std::size_t k = 0;; ++k) {
        out.insert(out.end(), layer.begin(), layer.end());
        if (k == n) break;
        std::vector<Path> next;
        for (const auto& p : layer)
            for (auto e : g.received(p.source())) next.push_back(p.append(g, e));
        layer = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

WeightSystem::WeightSystem(const Graph& g, std::vector<Rational> weights) : weights_(std::move(weights))
{
    if (weights_.size() != g.edge_count())
        throw InputError("weight system has " + std::to_string(weights_.size()) + " entries for " +
                         std::to_string(g.edge_count()) + " edges");
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        weights_[i].canonicalize();
        if (sgn(weights_[i]) <= 0)
            throw InputError("non-positive weight " + to_string(weights_[i]) + " on edge \"" +
                             g.name(EdgeId{static_cast<std::uint32_t>(i)}) + "\"");
    }
}

WeightSystem WeightSystem::constant(const Graph& g, const Rational& c)
{
    return WeightSystem(g, std::vector<Rational>(g.edge_count(), c));
}

WeightSystem WeightSystem::uniform(const Graph& g)
{
    std::vector<Rational> w;
    for (auto e : g.edges()) w.emplace_back(1, g.emitted(g.source(e)).size());
    return WeightSystem(g, std::move(w));
}

// ---------------------------------------------------------------------------

namespace {

Rational power(const Rational& base, std::size_t k)
{
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), k);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), k);
    return canonical(Rational(num, den));
}

std::string describe_rule(const Rational& lambda0, const Rational& ratio)
{
    if (ratio == 1) return "lambda = " + to_string(lambda0);
    return "lambda_k = " + to_string(lambda0) + " * (" + to_string(ratio) + ")^k";
}

}  // namespace

LazyGraph LazyGraph::rose(const Rational& lambda0, const Rational& ratio)
{
    if (sgn(lambda0) <= 0 || sgn(ratio) <= 0) throw InputError("lazy weights must be positive");
    return LazyGraph("rose: loops e1, e2, ... at v; " + describe_rule(lambda0, ratio),
                     [lambda0, ratio](std::size_t k) -> std::optional<LazyEdge> {
                         return LazyEdge{"e" + std::to_string(k + 1), "v", "v", lambda0 * power(ratio, k)};
                     });
}

LazyGraph LazyGraph::star(const Rational& lambda0, const Rational& ratio)
{
    if (sgn(lambda0) <= 0 || sgn(ratio) <= 0) throw InputError("lazy weights must be positive");
    return LazyGraph("star: edges e_k from w_k to v; " + describe_rule(lambda0, ratio),
                     [lambda0, ratio](std::size_t k) -> std::optional<LazyEdge> {
                         return LazyEdge{"e" + std::to_string(k + 1), "w" + std::to_string(k + 1), "v",
                                         lambda0 * power(ratio, k)};
                     });
}

std::vector<LazyEdge> LazyGraph::enumerate(std::size_t budget) const
{
    std::vector<LazyEdge> out;
    for (std::size_t k = 0; k < budget; ++k) {
        auto e = generator_(k);
        if (!e) break;
        out.push_back(std::move(*e));
    }
    return out;
}

// ---------------------------------------------------------------------------

VertexClassification classify_vertices(const Graph& g)
{
    VertexClassification c;
    for (auto v : g.vertices()) {
        if (g.is_source(v))
            c.sources.push_back(g.name(v));
        else
            c.regular_receivers.push_back(g.name(v));
        if (g.is_sink(v)) c.sinks.push_back(g.name(v));
    }
    return c;
}

namespace {

// Edges observed within a budget, split into the first and second half of the window.
struct Window {
    std::vector<LazyEdge> edges;
    std::size_t half = 0;
    bool exhausted = false;
    std::set<std::string> vertices;
    std::map<std::string, std::array<std::size_t, 2>> emits;     // counts per half
    std::map<std::string, std::array<std::size_t, 2>> receives;  // counts per half
};

Window observe(const LazyGraph& g, std::size_t budget)
{
    Window w;
    w.edges = g.enumerate(budget);
    w.exhausted = w.edges.size() < budget;
    w.half = budget / 2;
    for (std::size_t k = 0; k < w.edges.size(); ++k) {
        const auto& e = w.edges[k];
        std::size_t h = k < w.half ? 0 : 1;
        w.vertices.insert(e.src);
        w.vertices.insert(e.rng);
        w.emits[e.src][h]++;
        w.receives[e.rng][h]++;
        w.emits.try_emplace(e.rng, std::array<std::size_t, 2>{0, 0});
        w.receives.try_emplace(e.src, std::array<std::size_t, 2>{0, 0});
    }
    return w;
}

Graph materialize(const Window& w)
{
    std::vector<EdgeSpec> specs;
    for (const auto& e : w.edges) specs.push_back({e.id, e.src, e.rng});
    return Graph(std::vector<std::string>(w.vertices.begin(), w.vertices.end()), std::move(specs));
}

}  // namespace

VertexClassification classify_vertices(const LazyGraph& g, std::size_t budget)
{
    Window w = observe(g, budget);
    if (w.exhausted) {
        auto c = classify_vertices(materialize(w));
        c.budget = budget;
        return c;
    }
    VertexClassification c;
    c.exact = false;
    c.suspected = true;
    c.budget = budget;
    for (const auto& v : w.vertices) {
        const auto& em = w.emits[v];
        const auto& re = w.receives[v];
        if (re[0] + re[1] == 0)
            c.sources.push_back(v);
        else if (re[0] > 0 && re[1] > 0)
            c.infinite_receivers.push_back(v);
        else
            c.regular_receivers.push_back(v);
        if (em[0] + em[1] == 0) c.sinks.push_back(v);
        if (em[0] > 0 && em[1] > 0) c.infinite_emitters.push_back(v);
    }
    return c;
}

// ---------------------------------------------------------------------------

BoundaryAtlas enumerate_boundary(const Graph& g, std::size_t depth)
{
    BoundaryAtlas atlas;
    if (g.is_acyclic()) {
        std::vector<Path> layer;
        for (auto v : g.vertices())
            if (g.is_source(v)) layer.push_back(Path::vertex(v));
        while (!layer.empty()) {
            atlas.paths.insert(atlas.paths.end(), layer.begin(), layer.end());
            std::vector<Path> next;
            for (const auto& p : layer)
                for (auto e : g.emitted(p.range())) next.push_back(p.prepend(g, e));
            layer = std::move(next);
        }
        std::sort(atlas.paths.begin(), atlas.paths.end());
        for (const auto& p : atlas.paths) atlas.depth = std::max(atlas.depth, p.length());
        atlas.complete = true;
    } else {
        atlas.paths = paths_up_to(g, depth);
        atlas.depth = depth;
        atlas.complete = false;
        atlas.note = "boundary incomplete (infinite paths exist)";
    }
    for (const auto& p : atlas.paths) {
        std::optional<std::size_t> parent;
        if (!p.is_vertex()) {
            auto edges = p.edges();
            Path prefix = edges.size() == 1 ? Path::vertex(p.range())
                                            : Path::from_edges(g, edges.subspan(0, edges.size() - 1));
            auto it = std::lower_bound(atlas.paths.begin(), atlas.paths.end(), prefix);
            if (it != atlas.paths.end() && *it == prefix) parent = static_cast<std::size_t>(it - atlas.paths.begin());
        }
        atlas.parent.push_back(parent);
    }
    return atlas;
}

std::vector<Path> truncation_atoms(const Graph& g, std::size_t depth)
{
    std::vector<Path> out;
    for (const auto& p : paths_up_to(g, depth))
        if (p.length() == depth || g.is_source(p.source())) out.push_back(p);
    return out;
}

// ---------------------------------------------------------------------------

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::holds:
        return "holds";
    case Verdict::holds_on_truncation_evidence:
        return "holds on truncation evidence";
    case Verdict::inconclusive:
        return "inconclusive";
    case Verdict::fails_on_truncation_evidence:
        return "fails on truncation evidence";
    }
    return "unknown";
}

ConditionReport check_lambda_conditions(const Graph& g, const WeightSystem& lambda)
{
    if (lambda.size() != g.edge_count()) throw PreconditionError("weight system does not match graph");
    ConditionReport rep{Verdict::holds, Verdict::holds, Rational(0), {}, std::nullopt, "exact (finite graph)"};
    for (auto v : g.vertices()) {
        if (g.is_sink(v)) continue;
        Rational sum = 0;
        for (auto e : g.emitted(v)) sum += lambda[e];
        rep.sup = std::max(rep.sup, sum);
        rep.emitter_sums.push_back({g.name(v), sum, g.emitted(v).size()});
    }
    return rep;
}

namespace {

Verdict worst(Verdict a, Verdict b)
{
    return static_cast<int>(a) > static_cast<int>(b) ? a : b;
}

}  // namespace

ConditionReport check_lambda_conditions(const LazyGraph& g, std::size_t budget)
{
    Window w = observe(g, budget);
    if (w.exhausted) {
        Graph finite = materialize(w);
        std::vector<Rational> weights(finite.edge_count());
        for (const auto& e : w.edges) weights[finite.edge(e.id).index] = e.lambda;
        auto rep = check_lambda_conditions(finite, WeightSystem(finite, std::move(weights)));
        rep.budget = budget;
        rep.note = "generator exhausted within budget; exact";
        return rep;
    }

    // Partial sums per emitter after the first half and after the whole window.
    std::map<std::string, Rational> first_half;
    std::map<std::string, Rational> full;
    std::map<std::string, std::size_t> count;
    // Largest weight into each receiver per half.
    std::map<std::string, std::array<Rational, 2>> into;
    for (std::size_t k = 0; k < w.edges.size(); ++k) {
        const auto& e = w.edges[k];
        std::size_t h = k < w.half ? 0 : 1;
        if (h == 0) first_half[e.src] += e.lambda;
        full[e.src] += e.lambda;
        count[e.src]++;
        auto& m = into[e.rng][h];
        m = std::max(m, e.lambda);
    }

    ConditionReport rep{Verdict::holds_on_truncation_evidence, Verdict::holds_on_truncation_evidence, Rational(0), {},
                        budget, "verdicts relative to a window of " + std::to_string(budget) + " edges"};
    Rational sup_first = 0;
    for (const auto& [v, s] : first_half) sup_first = std::max(sup_first, s);
    for (const auto& [v, s] : full) {
        rep.sup = std::max(rep.sup, s);
        rep.emitter_sums.push_back({v, s, count[v]});
        auto it = first_half.find(v);
        if (it == first_half.end() || sgn(it->second) == 0) continue;
        Rational growth = s - it->second;
        if (growth >= it->second)
            rep.bounded = Verdict::fails_on_truncation_evidence;
        else if (growth * Rational(budget) > s)
            rep.bounded = worst(rep.bounded, Verdict::inconclusive);
    }
    if (sgn(sup_first) > 0 && rep.sup >= 2 * sup_first) rep.bounded = Verdict::fails_on_truncation_evidence;

    auto classes = classify_vertices(g, budget);
    for (const auto& v : classes.infinite_receivers) {
        const auto& [head, tail] = into[v];
        if (tail >= head)
            rep.vanishing = Verdict::fails_on_truncation_evidence;
        else if (tail * Rational(budget) > head)
            rep.vanishing = worst(rep.vanishing, Verdict::inconclusive);
    }
    return rep;
}

}  // namespace cpcross
