#include "cpcross/corpus.hpp"

#include "cpcross/error.hpp"

#include <array>

namespace cpcross {

namespace {

CorpusEntry make_fixture(std::string name, std::vector<std::string> vertices, std::vector<EdgeSpec> edges,
                         std::vector<Rational> lambda)
{
    auto g = std::make_shared<const Graph>(std::move(vertices), std::move(edges));
    WeightSystem w(*g, std::move(lambda));
    return {std::move(name), "fixture", g, std::move(w), std::nullopt};
}

std::string numbered(char prefix, std::size_t i)
{
    std::string digits = std::to_string(i);
    if (digits.size() < 2) digits.insert(0, "0");
    return prefix + digits;
}

}  // namespace

std::vector<CorpusEntry> builtin_fixtures()
{
    std::vector<CorpusEntry> out;
    out.push_back(make_fixture("G_line", {"w", "v"}, {{"e", "w", "v"}}, {Rational(1)}));
    out.push_back(make_fixture("G_loop", {"v"}, {{"e", "v", "v"}}, {Rational(1)}));
    out.push_back(make_fixture("G_2loop", {"v"}, {{"e", "v", "v"}, {"f", "v", "v"}}, {Rational(1, 2), Rational(1, 2)}));
    out.push_back(make_fixture("G_fork", {"w1", "w2", "v"}, {{"e", "w1", "v"}, {"f", "w2", "v"}},
                               {Rational(1, 3), Rational(2, 3)}));
    return out;
}

CorpusEntry builtin_fixture(const std::string& name)
{
    for (auto& f : builtin_fixtures())
        if (f.name == name) return f;
    throw InputError("unknown fixture " + name);
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi)
{
    if (hi < lo) throw PreconditionError("empty draw range");
    return lo + rng() % (hi - lo + 1);
}

GraphPtr random_graph(std::mt19937_64& rng, const RandomGraphOptions& options)
{
    using Shape = RandomGraphOptions::Shape;
    const std::size_t n = draw(rng, options.shape == Shape::cyclic ? 1 : 2, options.max_vertices);
    std::vector<std::string> vertices;
    for (std::size_t i = 0; i < n; ++i) vertices.push_back(numbered('v', i));

    std::vector<EdgeSpec> edges;
    auto add = [&](std::size_t s, std::size_t r) {
        edges.push_back({numbered('e', edges.size()), vertices[s], vertices[r]});
    };

    switch (options.shape) {
    case Shape::corner:
        for (std::size_t s = 0; s < n && edges.size() < options.max_edges; ++s)
            if (draw(rng, 0, 3) != 0) add(s, draw(rng, 0, n - 1));
        break;
    case Shape::acyclic: {
        if (n < 2) break;
        const std::size_t m = draw(rng, 1, options.max_edges);
        for (std::size_t k = 0; k < m; ++k) {
            std::size_t s = draw(rng, 0, n - 2);
            add(s, draw(rng, s + 1, n - 1));
        }
        break;
    }
    case Shape::cyclic:
    case Shape::any: {
        const std::size_t m = draw(rng, 1, options.max_edges);
        for (std::size_t k = 0; k < m; ++k) add(draw(rng, 0, n - 1), draw(rng, 0, n - 1));
        break;
    }
    }

    auto g = std::make_shared<const Graph>(vertices, edges);
    if (options.shape == Shape::cyclic && g->is_acyclic()) {
        // Close a cycle through the first edge.
        const auto& e = edges.front();
        edges.push_back({numbered('e', edges.size()), e.rng, e.src});
        g = std::make_shared<const Graph>(vertices, edges);
    }
    return g;
}

WeightSystem random_weights(std::mt19937_64& rng, const Graph& g, std::uint64_t max_term)
{
    std::vector<Rational> w;
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        auto p = draw(rng, 1, max_term);
        auto q = draw(rng, 1, max_term);
        w.push_back(canonical(Rational(static_cast<unsigned long>(p), static_cast<unsigned long>(q))));
    }
    return WeightSystem(g, std::move(w));
}

std::vector<CorpusEntry> regression_corpus()
{
    using Shape = RandomGraphOptions::Shape;
    struct Plan {
        const char* kind;
        Shape shape;
        std::size_t max_vertices;
        std::size_t max_edges;
        std::size_t count;
    };
    constexpr std::uint64_t base_seed = 20240917;
    const std::array<Plan, 3> plans{{
        {"acyclic", Shape::acyclic, 10, 12, 8},
        {"cyclic", Shape::cyclic, 8, 16, 6},
        {"corner", Shape::corner, 8, 8, 6},
    }};
    std::vector<CorpusEntry> out;
    std::size_t index = 0;
    for (const auto& plan : plans)
        for (std::size_t k = 0; k < plan.count; ++k, ++index) {
            const std::uint64_t seed = base_seed + index;
            std::mt19937_64 rng(seed);
            auto g = random_graph(rng, {plan.max_vertices, plan.max_edges, plan.shape});
            WeightSystem w = plan.shape == Shape::corner ? WeightSystem::constant(*g, Rational(1))
                                                         : random_weights(rng, *g);
            out.push_back({"R" + std::to_string(index + 1) + "_" + plan.kind, plan.kind, g, std::move(w), seed});
        }
    return out;
}

std::vector<CorpusEntry> full_corpus()
{
    auto out = builtin_fixtures();
    auto reg = regression_corpus();
    out.insert(out.end(), reg.begin(), reg.end());
    return out;
}

}  // namespace cpcross
