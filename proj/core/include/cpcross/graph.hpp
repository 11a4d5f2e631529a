#pragma once

#include "cpcross/rational.hpp"

#include <boost/container/small_vector.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cpcross {

struct VertexId {
    std::uint32_t index = 0;
    auto operator<=>(const VertexId&) const = default;
};

struct EdgeId {
    std::uint32_t index = 0;
    auto operator<=>(const EdgeId&) const = default;
};

struct EdgeSpec {
    std::string id;
    std::string src;
    std::string rng;
};

// Finite directed multigraph. An edge e runs from s(e) to r(e). Vertices and
// edges are indexed in sorted order of their names.
class Graph {
public:
    Graph(std::vector<std::string> vertices, std::vector<EdgeSpec> edges);

    std::size_t vertex_count() const { return vertex_names_.size(); }
    std::size_t edge_count() const { return edge_names_.size(); }

    const std::string& name(VertexId v) const { return vertex_names_.at(v.index); }
    const std::string& name(EdgeId e) const { return edge_names_.at(e.index); }

    VertexId source(EdgeId e) const { return src_.at(e.index); }
    VertexId range(EdgeId e) const { return rng_.at(e.index); }

    // s^{-1}(v) and r^{-1}(v), sorted by edge id.
    std::span<const EdgeId> emitted(VertexId v) const { return emitted_.at(v.index); }
    std::span<const EdgeId> received(VertexId v) const { return received_.at(v.index); }

    bool is_source(VertexId v) const { return received(v).empty(); }
    bool is_sink(VertexId v) const { return emitted(v).empty(); }
    bool is_acyclic() const { return acyclic_; }

    std::optional<VertexId> find_vertex(const std::string& name) const;
    std::optional<EdgeId> find_edge(const std::string& name) const;
    VertexId vertex(const std::string& name) const;
    EdgeId edge(const std::string& name) const;

    std::vector<VertexId> vertices() const;
    std::vector<EdgeId> edges() const;

private:
    std::vector<std::string> vertex_names_;
    std::vector<std::string> edge_names_;
    std::vector<VertexId> src_;
    std::vector<VertexId> rng_;
    std::vector<std::vector<EdgeId>> emitted_;
    std::vector<std::vector<EdgeId>> received_;
    bool acyclic_ = true;
};

using GraphPtr = std::shared_ptr<const Graph>;

// A finite path mu = mu_1 ... mu_n with s(mu_i) = r(mu_{i+1}), or a vertex.
// Ordered by length, then edge sequence, then vertex.
class Path {
public:
    static Path vertex(VertexId v) { return Path(v, v, {}); }
    static Path edge(const Graph& g, EdgeId e);
    static Path from_edges(const Graph& g, std::span<const EdgeId> edges);

    std::size_t length() const { return edges_.size(); }
    bool is_vertex() const { return edges_.empty(); }
    VertexId range() const { return range_; }
    VertexId source() const { return source_; }
    std::span<const EdgeId> edges() const { return {edges_.data(), edges_.size()}; }
    EdgeId first_edge() const;

    // e mu, requires s(e) = r(mu).
    Path prepend(const Graph& g, EdgeId e) const;
    // mu e, requires r(e) = s(mu).
    Path append(const Graph& g, EdgeId e) const;

    // True when this path is an initial segment of other. A vertex v is a
    // prefix of every path with range v.
    bool is_prefix_of(const Path& other) const;

    std::vector<std::string> edge_names(const Graph& g) const;
    std::string str(const Graph& g) const;

    friend std::strong_ordering operator<=>(const Path& a, const Path& b);
    friend bool operator==(const Path& a, const Path& b)
    {
        return a.range_ == b.range_ && a.source_ == b.source_ && a.edges_ == b.edges_;
    }

private:
    using EdgeList = boost::container::small_vector<EdgeId, 6>;
    Path(VertexId r, VertexId s, EdgeList edges) : range_(r), source_(s), edges_(std::move(edges)) {}

    VertexId range_;
    VertexId source_;
    EdgeList edges_;

    friend Path shift(const Graph& g, const Path& p);
};

// sigma(mu) = mu_2 ... mu_n, and sigma(mu_1) = s(mu_1).
Path shift(const Graph& g, const Path& p);

// All paths of length exactly n, in path order.
std::vector<Path> paths_of_length(const Graph& g, std::size_t n);
// All paths of length at most n, in path order.
std::vector<Path> paths_up_to(const Graph& g, std::size_t n);

// Strictly positive weight per edge, indexed by EdgeId.
class WeightSystem {
public:
    WeightSystem() = default;
    WeightSystem(const Graph& g, std::vector<Rational> weights);

    static WeightSystem constant(const Graph& g, const Rational& c);
    // lambda_e = 1 / |s^{-1}(s(e))|.
    static WeightSystem uniform(const Graph& g);

    const Rational& operator[](EdgeId e) const { return weights_.at(e.index); }
    std::size_t size() const { return weights_.size(); }
    const std::vector<Rational>& values() const { return weights_; }

private:
    std::vector<Rational> weights_;
};

// Countable graph given by an edge generator. The generator returns the k-th
// edge or nothing when the graph is exhausted.
struct LazyEdge {
    std::string id;
    std::string src;
    std::string rng;
    Rational lambda;
};

class LazyGraph {
public:
    using Generator = std::function<std::optional<LazyEdge>(std::size_t)>;

    LazyGraph(std::string description, Generator generator)
        : description_(std::move(description)), generator_(std::move(generator))
    {
    }

    // Countably many loops at a single vertex v.
    static LazyGraph rose(const Rational& lambda0, const Rational& ratio = Rational(1));
    // Vertex v receives one edge from each of w1, w2, ...
    static LazyGraph star(const Rational& lambda0, const Rational& ratio = Rational(1));

    const std::string& description() const { return description_; }
    // Enumerates at most budget edges.
    std::vector<LazyEdge> enumerate(std::size_t budget) const;

private:
    std::string description_;
    Generator generator_;
};

struct VertexClassification {
    std::vector<std::string> sources;
    std::vector<std::string> sinks;
    std::vector<std::string> regular_receivers;
    std::vector<std::string> infinite_receivers;
    std::vector<std::string> infinite_emitters;
    bool exact = true;            // false when derived from a truncation
    bool suspected = false;       // infinite sets are budget-relative guesses
    std::optional<std::size_t> budget;
};

VertexClassification classify_vertices(const Graph& g);
VertexClassification classify_vertices(const LazyGraph& g, std::size_t budget);

struct BoundaryAtlas {
    std::vector<Path> paths;                      // sorted
    std::vector<std::optional<std::size_t>> parent;  // index of the path with the last edge removed
    std::size_t depth = 0;
    bool complete = true;
    std::string note;
};

// Acyclic graphs: every finite path whose source is a source vertex. Cyclic
// graphs: the cylinder tree of all paths up to depth, flagged incomplete.
BoundaryAtlas enumerate_boundary(const Graph& g, std::size_t depth);

// Atoms of the depth-d truncation of the diagonal algebra:
// {mu : |mu| = d} together with {mu : |mu| < d, s(mu) a source}.
std::vector<Path> truncation_atoms(const Graph& g, std::size_t depth);

enum class Verdict { holds, holds_on_truncation_evidence, inconclusive, fails_on_truncation_evidence };
std::string to_string(Verdict v);

struct VertexSum {
    std::string vertex;
    Rational value;
    std::size_t terms = 0;
};

struct ConditionReport {
    Verdict bounded;        // sup_v sum_{s(e)=v} lambda_e < infinity
    Verdict vanishing;      // lambda_e -> 0 along r^{-1}(v) for every v
    Rational sup;           // exact for finite graphs, a lower bound otherwise
    std::vector<VertexSum> emitter_sums;
    std::optional<std::size_t> budget;
    std::string note;
};

ConditionReport check_lambda_conditions(const Graph& g, const WeightSystem& lambda);
ConditionReport check_lambda_conditions(const LazyGraph& g, std::size_t budget);

}  // namespace cpcross
