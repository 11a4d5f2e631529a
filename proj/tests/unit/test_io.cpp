#include "../support/fixtures.hpp"
#include "../support/generators.hpp"

#include "cpcross/corpus.hpp"
#include "cpcross/error.hpp"
#include "cpcross/io.hpp"

#include <doctest.h>

using namespace cpcross;

TEST_CASE("rational literals")
{
    CHECK(parse_rational("3") == 3);
    CHECK(parse_rational("-2/4") == Rational(-1, 2));
    CHECK_THROWS_WITH_AS(parse_rational("0.25"), doctest::Contains("--float"), InputError);
    CHECK(parse_rational("0.25", true) == Rational(1, 4));
    CHECK(parse_rational("1e-3", true) == Rational(1, 1000));
    CHECK_THROWS_AS(parse_rational("1/0"), InputError);
    CHECK_THROWS_AS(parse_rational("abc"), InputError);
    CHECK(to_string(Rational(6, 4)) == "3/2");
    CHECK(to_string(Rational(-5)) == "-5");
}

TEST_CASE("graph documents")
{
    CHECK_THROWS_WITH_AS(load_graph(fx::path("missing.json")), doctest::Contains("file not found"), InputError);

    auto partial = Json::parse(R"({"vertices":["v"],"edges":[{"id":"e","src":"v","rng":"v","lambda":"1"},
                                                          {"id":"f","src":"v","rng":"v"}]})");
    CHECK_THROWS_WITH_AS(graph_from_json(partial), doctest::Contains("every edge"), InputError);

    auto decimal = Json::parse(R"({"vertices":["v"],"edges":[{"id":"e","src":"v","rng":"v","lambda":0.5}]})");
    CHECK_THROWS_AS(graph_from_json(decimal), InputError);
    CHECK((*graph_from_json(decimal, true).weights)[EdgeId{0}] == Rational(1, 2));

    auto no_weights = Json::parse(R"({"vertices":["v"],"edges":[]})");
    CHECK_FALSE(graph_from_json(no_weights).weights);
    CHECK_THROWS_AS(graph_from_json(Json::parse(R"({"vertices":["v"]})")), InputError);
}

TEST_CASE("property: graph documents round-trip")
{
    auto fail = gen::first_failure(10, 50, [](std::mt19937_64& rng) {
        auto g = gen::small_graph(rng);
        auto w = random_weights(rng, *g);
        auto doc = graph_from_json(Json::parse(graph_to_json(*g, &w).dump()));
        return graph_to_json(*doc.graph, &*doc.weights) == graph_to_json(*g, &w);
    });
    CHECK_MESSAGE(!fail, "first failing seed: " << fail.value_or(0));
}

TEST_CASE("diagonal elements round-trip")
{
    auto g = fx::graph("g_2loop").graph;
    auto ef = Path::from_edges(*g, std::vector{g->edge("e"), g->edge("f")});
    DiagElement a(g);
    a.add_term(ef, Rational(1, 2));
    a.add_term(Path::vertex(g->vertex("v")), Rational(-3));
    auto j = diag_to_json(a);
    CHECK(j.dump() == R"({"terms":[{"path":[],"vertex":"v","coeff":"-3"},{"path":["e","f"],"coeff":"1/2"}]})");
    CHECK(diag_from_json(g, j) == a);
    CHECK_THROWS_AS(diag_from_json(g, Json::parse(R"({"terms":[{"path":["x"]}]})")), InputError);
}

TEST_CASE("matrices from JSON and CSV agree")
{
    auto a = load_matrix(fx::path("m_half.json"));
    auto b = load_matrix(fx::path("m_half.csv"));
    CHECK(a == b);
    CHECK(a(0, 1) == Rational(1, 2));
    CHECK(matrix_to_json(a).dump() == R"([["1/2","1/2"],["0","1"]])");
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"([["1","2"],["3"]])")), InputError);
    CHECK_THROWS_AS(matrix_from_csv("1,2\n3\n"), InputError);
}

TEST_CASE("subalgebra documents")
{
    auto b = subalgebra_from_json(2, read_json_file(fx::path("b_constants.json")));
    CHECK(b == Subalgebra::constants(2));
    CHECK(subalgebra_to_json(b).dump() == R"({"blocks":[[0,1]]})");
    CHECK_THROWS_AS(subalgebra_from_json(2, Json::parse(R"({"blocks":[[0,5]]})")), InputError);
}

TEST_CASE("shipped fixture files match the built-in corpus")
{
    for (const auto& f : builtin_fixtures()) {
        std::string file = f.name.substr(2);
        for (auto& c : file) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        auto doc = fx::graph("g_" + file);
        CHECK(graph_to_json(*doc.graph, &*doc.weights) == graph_to_json(*f.graph, &f.lambda));
    }
}

TEST_CASE("regression corpus is reproducible")
{
    auto a = regression_corpus();
    auto b = regression_corpus();
    REQUIRE(a.size() == 20);
    std::size_t acyclic = 0, cyclic = 0, corner = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(graph_to_json(*a[i].graph, &a[i].lambda) == graph_to_json(*b[i].graph, &b[i].lambda));
        acyclic += a[i].kind == "acyclic" && a[i].graph->is_acyclic();
        cyclic += a[i].kind == "cyclic" && !a[i].graph->is_acyclic();
        corner += a[i].kind == "corner";
        if (a[i].kind == "corner")
            for (auto v : a[i].graph->vertices()) CHECK(a[i].graph->emitted(v).size() <= 1);
    }
    CHECK(acyclic == 8);
    CHECK(cyclic == 6);
    CHECK(corner == 6);
}

TEST_CASE("shipped regression files match the seeded generator")
{
    for (const auto& entry : regression_corpus()) {
        auto doc = load_graph(fx::path("regression/" + entry.name + ".json"));
        CHECK(graph_to_json(*doc.graph, &*doc.weights) == graph_to_json(*entry.graph, &entry.lambda));
    }
}
