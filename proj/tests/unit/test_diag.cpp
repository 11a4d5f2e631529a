#include "../support/fixtures.hpp"
#include "../support/generators.hpp"
#include "../support/oracles.hpp"

#include "cpcross/diag.hpp"
#include "cpcross/error.hpp"

#include <doctest.h>

using namespace cpcross;

namespace {

struct Fixture {
    GraphPtr g;
    WeightSystem w;

    explicit Fixture(const std::string& name)
    {
        auto doc = fx::graph(name);
        g = doc.graph;
        w = *doc.weights;
    }

    DiagElement q(const std::vector<std::string>& edges) const
    {
        std::vector<EdgeId> ids;
        for (const auto& e : edges) ids.push_back(g->edge(e));
        return DiagElement::projection(g, Path::from_edges(*g, ids));
    }
    DiagElement qv(const std::string& v) const { return DiagElement::projection(g, Path::vertex(g->vertex(v))); }
};

oracle::PointFunction on_points(const DiagElement& a, const std::vector<oracle::RawPath>& points)
{
    const Graph& g = a.graph();
    oracle::PointFunction f;
    for (const auto& x : points) {
        Rational s = 0;
        for (const auto& [p, c] : a.terms()) s += c * oracle::cylinder_value({g.name(p.range()), p.edge_names(g)}, x);
        f[x] = s;
    }
    return f;
}

std::function<Rational(const oracle::RawPath&)> as_function(const DiagElement& a)
{
    return [&a](const oracle::RawPath& x) {
        const Graph& g = a.graph();
        Rational s = 0;
        for (const auto& [p, c] : a.terms()) s += c * oracle::cylinder_value({g.name(p.range()), p.edge_names(g)}, x);
        return s;
    };
}

DiagElement random_element(std::mt19937_64& rng, const GraphPtr& g, std::size_t depth)
{
    auto ps = paths_up_to(*g, depth);
    DiagElement a(g);
    const std::size_t terms = draw(rng, 1, 4);
    for (std::size_t k = 0; k < terms; ++k) {
        Rational c = gen::small_rational(rng);
        if (draw(rng, 0, 1)) c = -c;
        a.add_term(ps[draw(rng, 0, ps.size() - 1)], c);
    }
    return a;
}

}  // namespace

TEST_CASE("normalize refines vertex projections")
{
    Fixture fork("g_fork");
    auto n = normalize(fork.qv("v"), 1);
    CHECK(n == fork.q({"e"}) + fork.q({"f"}));

    Fixture line("g_line");
    CHECK(normalize(line.qv("w"), 5) == line.qv("w"));

    auto zero = normalize(fork.qv("v") - fork.q({"e"}) - fork.q({"f"}));
    CHECK(zero.empty());
    CHECK_THROWS_AS(normalize(fork.q({"e"}), 0), PreconditionError);
}

TEST_CASE("products of cylinder projections")
{
    Fixture loop("g_loop");
    CHECK(equals(multiply(loop.q({"e"}), loop.q({"e", "e"})), loop.q({"e", "e"})));

    Fixture two("g_2loop");
    CHECK(multiply(two.q({"e"}), two.q({"f"})).empty());
    auto s = two.q({"e"}) + two.q({"f"});
    CHECK(equals(multiply(s, s), s));
}

TEST_CASE("alpha prepends emitted edges")
{
    Fixture line("g_line");
    CHECK(alpha(line.qv("w")) == line.q({"e"}));
    CHECK(alpha(line.qv("v")).empty());

    Fixture two("g_2loop");
    CHECK(alpha(two.qv("v")) == two.q({"e"}) + two.q({"f"}));
}

TEST_CASE("transfer on cylinders")
{
    Fixture line("g_line");
    CHECK(equals(transfer(line.q({"e"}), line.w), line.qv("w")));
    CHECK(transfer(line.qv("w"), line.w).empty());

    Fixture fork("g_fork");
    CHECK(equals(transfer(fork.qv("v"), fork.w), Rational(1, 3) * fork.qv("w1") + Rational(2, 3) * fork.qv("w2")));
}

TEST_CASE("equality in the algebra")
{
    Fixture line("g_line");
    CHECK(equals(line.qv("v"), line.q({"e"})));
    Fixture two("g_2loop");
    CHECK_FALSE(equals(two.q({"e"}), two.q({"f"})));
    CHECK(equals(DiagElement(two.g), 0 * two.q({"e"})));
}

TEST_CASE("elements of different graphs do not mix")
{
    Fixture line("g_line");
    Fixture two("g_2loop");
    CHECK_THROWS_AS(line.qv("v") + two.qv("v"), PreconditionError);
    CHECK_THROWS_AS(multiply(line.qv("v"), two.qv("v")), PreconditionError);
}

TEST_CASE("alpha is undefined on graphs with infinite emitters")
{
    CHECK_THROWS_AS(check_alpha_defined(LazyGraph::rose(Rational(1)), 100), PreconditionError);
    CHECK_NOTHROW(check_alpha_defined(LazyGraph::star(Rational(1)), 100));
}

TEST_CASE("property: calculus agrees pointwise with the reference model")
{
    auto fail = gen::first_failure(1000, 150, [](std::mt19937_64& rng) {
        auto g = gen::small_graph(rng, 5, 8);
        auto w = random_weights(rng, *g);
        auto ref = oracle::RawGraph::from(*g, &w);
        const std::size_t d = draw(rng, 0, 2);
        auto points = oracle::atoms(ref, d + 2);

        auto a = random_element(rng, g, d);
        auto b = random_element(rng, g, d);
        if (on_points(normalize(a, d + 1), points) != on_points(a, points)) return false;
        if (equals(normalize(a, d + 1), a) != true) return false;

        auto prod = on_points(multiply(a, b), points);
        auto fa = on_points(a, points), fb = on_points(b, points);
        for (const auto& x : points)
            if (prod[x] != fa[x] * fb[x]) return false;

        if (on_points(alpha(a), points) != oracle::shift_pullback(ref, points, as_function(a))) return false;
        if (on_points(transfer(a, w), points) != oracle::perron_frobenius(ref, points, as_function(a))) return false;

        bool same = on_points(a, points) == on_points(b, points);
        return equals(a, b) == same;
    });
    CHECK_MESSAGE(!fail, "first failing seed: " << fail.value_or(0));
}

TEST_CASE("property: alpha is multiplicative and unital on emitters")
{
    auto fail = gen::first_failure(2000, 100, [](std::mt19937_64& rng) {
        auto g = gen::small_graph(rng, 5, 8);
        auto a = random_element(rng, g, 2);
        auto b = random_element(rng, g, 2);
        return equals(alpha(multiply(a, b)), multiply(alpha(a), alpha(b)));
    });
    CHECK_MESSAGE(!fail, "first failing seed: " << fail.value_or(0));
}

TEST_CASE("serialized form is readable")
{
    Fixture two("g_2loop");
    auto a = two.q({"e", "f"}) * Rational(1, 2);
    CHECK(a.str().find("1/2") != std::string::npos);
}
