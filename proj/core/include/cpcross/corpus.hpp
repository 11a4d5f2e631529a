#pragma once

#include "cpcross/graph.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cpcross {

struct CorpusEntry {
    std::string name;
    std::string kind;  // "fixture", "acyclic", "cyclic" or "corner"
    GraphPtr graph;
    WeightSystem lambda;
    std::optional<std::uint64_t> seed;
};

// G_line (w -e-> v, lambda 1), G_loop (one loop, lambda 1), G_2loop (two loops,
// lambda 1/2 each), G_fork (w1 -e-> v <-f- w2, lambda 1/3 and 2/3).
std::vector<CorpusEntry> builtin_fixtures();
CorpusEntry builtin_fixture(const std::string& name);

// Twenty graphs from frozen seeds: 8 acyclic, 6 cyclic, 6 of corner type
// (every vertex emits at most one edge, lambda = 1).
std::vector<CorpusEntry> regression_corpus();
std::vector<CorpusEntry> full_corpus();

struct RandomGraphOptions {
    std::size_t max_vertices = 8;
    std::size_t max_edges = 16;
    enum class Shape { any, acyclic, cyclic, corner } shape = Shape::any;
};

// Draws use only raw mt19937_64 output reduced modulo the range, so the
// corpus is identical on every platform.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi);
GraphPtr random_graph(std::mt19937_64& rng, const RandomGraphOptions& options);
// lambda_e = p/q with 1 <= p, q <= max_term.
WeightSystem random_weights(std::mt19937_64& rng, const Graph& g, std::uint64_t max_term = 5);

}  // namespace cpcross
