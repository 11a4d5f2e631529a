#include "../support/fixtures.hpp"
#include "../support/generators.hpp"
#include "../support/oracles.hpp"

#include "cpcross/error.hpp"
#include "cpcross/graph.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace cpcross;

namespace {

std::set<oracle::RawPath> raw(const Graph& g, const std::vector<Path>& ps)
{
    std::set<oracle::RawPath> out;
    for (const auto& p : ps) out.insert({g.name(p.range()), p.edge_names(g)});
    return out;
}

std::vector<std::string> sorted(std::vector<std::string> v)
{
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("fixture documents load with sorted identifiers")
{
    auto line = fx::graph("g_line");
    CHECK(line.graph->vertex_count() == 2);
    CHECK(line.graph->edge_count() == 1);
    CHECK(line.graph->name(VertexId{0}) == "v");
    CHECK(line.graph->name(line.graph->source(EdgeId{0})) == "w");

    auto two = fx::graph("g_2loop");
    CHECK(two.graph->vertex_count() == 1);
    CHECK(two.graph->edge_count() == 2);
    REQUIRE(two.weights);
    CHECK((*two.weights)[two.graph->edge("f")] == Rational(1, 2));
}

TEST_CASE("graph construction rejects malformed input")
{
    CHECK_THROWS_WITH_AS(Graph({"v"}, {{"e", "v", "u"}}), doctest::Contains("dangling endpoint"), InputError);
    CHECK_THROWS_WITH_AS(Graph({"v", "v"}, {}), doctest::Contains("duplicate vertex"), InputError);
    CHECK_THROWS_WITH_AS(Graph({"v"}, {{"e", "v", "v"}, {"e", "v", "v"}}), doctest::Contains("duplicate edge"),
                         InputError);
}

TEST_CASE("vertex classification")
{
    auto line = fx::graph("g_line").graph;
    auto c = classify_vertices(*line);
    CHECK(c.sources == std::vector<std::string>{"w"});
    CHECK(c.sinks == std::vector<std::string>{"v"});
    CHECK(c.regular_receivers == std::vector<std::string>{"v"});
    CHECK(c.exact);

    auto two = classify_vertices(*fx::graph("g_2loop").graph);
    CHECK(two.sources.empty());
    CHECK(two.sinks.empty());

    auto rose = classify_vertices(LazyGraph::rose(Rational(1, 2), Rational(1, 2)), 1000);
    CHECK(rose.infinite_emitters == std::vector<std::string>{"v"});
    CHECK(rose.suspected);
    CHECK_FALSE(rose.exact);
}

TEST_CASE("property: sources, regular receivers and infinite receivers partition the vertices")
{
    auto fail = gen::first_failure(100, 200, [](std::mt19937_64& rng) {
        auto g = gen::small_graph(rng);
        auto c = classify_vertices(*g);
        std::vector<std::string> all = c.sources;
        all.insert(all.end(), c.regular_receivers.begin(), c.regular_receivers.end());
        all.insert(all.end(), c.infinite_receivers.begin(), c.infinite_receivers.end());
        std::vector<std::string> names;
        for (auto v : g->vertices()) names.push_back(g->name(v));
        return sorted(all) == sorted(names);
    });
    CHECK_MESSAGE(!fail, "first failing seed: " << fail.value_or(0));
}

TEST_CASE("shift drops the first edge")
{
    auto two = fx::graph("g_2loop").graph;
    auto ef = Path::from_edges(*two, std::vector{two->edge("e"), two->edge("f")});
    CHECK(shift(*two, ef) == Path::edge(*two, two->edge("f")));

    auto line = fx::graph("g_line").graph;
    CHECK(shift(*line, Path::edge(*line, line->edge("e"))) == Path::vertex(line->vertex("w")));
    CHECK_THROWS_WITH_AS(shift(*line, Path::vertex(line->vertex("v"))),
                         "shift undefined on length-0 path", PreconditionError);
}

TEST_CASE("path composition follows source to range")
{
    auto line = fx::graph("g_line").graph;
    auto e = line->edge("e");
    auto p = Path::edge(*line, e);
    CHECK(p.range() == line->vertex("v"));
    CHECK(p.source() == line->vertex("w"));
    CHECK_THROWS_AS(p.append(*line, e), PreconditionError);
    CHECK(Path::vertex(line->vertex("v")).is_prefix_of(p));
    CHECK_FALSE(Path::vertex(line->vertex("w")).is_prefix_of(p));
}

TEST_CASE("boundary enumeration")
{
    auto line = fx::graph("g_line").graph;
    auto a = enumerate_boundary(*line, 0);
    CHECK(a.complete);
    CHECK(raw(*line, a.paths) == std::set<oracle::RawPath>{{"w", {}}, {"v", {"e"}}});

    auto fork = fx::graph("g_fork").graph;
    CHECK(enumerate_boundary(*fork, 0).paths.size() == 4);

    auto loop = fx::graph("g_loop").graph;
    auto l = enumerate_boundary(*loop, 3);
    CHECK_FALSE(l.complete);
    CHECK(l.note == "boundary incomplete (infinite paths exist)");
    CHECK(raw(*loop, l.paths) ==
          std::set<oracle::RawPath>{{"v", {}}, {"v", {"e"}}, {"v", {"e", "e"}}, {"v", {"e", "e", "e"}}});
    for (std::size_t i = 1; i < l.paths.size(); ++i) {
        REQUIRE(l.parent[i]);
        CHECK(l.paths[*l.parent[i]].is_prefix_of(l.paths[i]));
    }
}

TEST_CASE("property: path and atom enumeration agree with the reference enumeration")
{
    auto fail = gen::first_failure(300, 150, [](std::mt19937_64& rng) {
        auto g = gen::small_graph(rng, 6, 10);
        auto ref = oracle::RawGraph::from(*g);
        const std::size_t d = draw(rng, 0, 3);
        auto ps = paths_up_to(*g, d);
        auto oracle_paths = oracle::all_paths(ref, d);
        if (raw(*g, ps) != std::set<oracle::RawPath>(oracle_paths.begin(), oracle_paths.end())) return false;
        if (!std::is_sorted(ps.begin(), ps.end())) return false;
        auto at = oracle::atoms(ref, d);
        if (raw(*g, truncation_atoms(*g, d)) != std::set<oracle::RawPath>(at.begin(), at.end())) return false;
        if (g->is_acyclic()) {
            auto b = oracle::atoms(ref, g->vertex_count());
            auto lib = enumerate_boundary(*g, 0).paths;
            if (raw(*g, lib) != std::set<oracle::RawPath>(b.begin(), b.end())) return false;
            if (lib.size() != b.size()) return false;
        }
        return true;
    });
    CHECK_MESSAGE(!fail, "first failing seed: " << fail.value_or(0));
}

TEST_CASE("lambda conditions on finite graphs")
{
    auto two = fx::graph("g_2loop");
    auto r = check_lambda_conditions(*two.graph, *two.weights);
    CHECK(r.sup == 1);
    CHECK(r.bounded == Verdict::holds);
    CHECK(r.vanishing == Verdict::holds);

    auto line = fx::graph("g_line").graph;
    auto r3 = check_lambda_conditions(*line, WeightSystem::constant(*line, Rational(3)));
    CHECK(r3.sup == 3);
    CHECK(r3.bounded == Verdict::holds);
}

TEST_CASE("lambda conditions on lazy graphs")
{
    auto star = check_lambda_conditions(LazyGraph::star(Rational(1)), 10000);
    CHECK(star.vanishing == Verdict::fails_on_truncation_evidence);
    CHECK(to_string(star.vanishing).find("fails") != std::string::npos);

    auto geometric = check_lambda_conditions(LazyGraph::star(Rational(1), Rational(1, 2)), 200);
    CHECK(geometric.vanishing == Verdict::holds_on_truncation_evidence);

    auto rose = check_lambda_conditions(LazyGraph::rose(Rational(1)), 1000);
    CHECK(rose.bounded == Verdict::fails_on_truncation_evidence);
    auto summable = check_lambda_conditions(LazyGraph::rose(Rational(1, 2), Rational(1, 2)), 200);
    CHECK(summable.bounded != Verdict::fails_on_truncation_evidence);
}

TEST_CASE("weights must be strictly positive")
{
    auto line = fx::graph("g_line").graph;
    CHECK_THROWS_AS(WeightSystem(*line, {Rational(0)}), InputError);
    CHECK_THROWS_AS(WeightSystem(*line, {Rational(1), Rational(1)}), InputError);
    auto fork = fx::graph("g_fork").graph;
    auto u = WeightSystem::uniform(*fork);
    CHECK(u[fork->edge("e")] == 1);
}
