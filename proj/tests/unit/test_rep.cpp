#include "../support/fixtures.hpp"
#include "../support/generators.hpp"

#include "cpcross/corpus.hpp"
#include "cpcross/error.hpp"
#include "cpcross/rep.hpp"

#include <doctest.h>

using namespace cpcross;

namespace {

GraphDocument load(const std::string& name) { return fx::graph(name); }

const RelationDefect& defect(const MatrixRep& rep, const std::string& relation)
{
    for (const auto& d : rep.defects)
        if (d.relation == relation) return d;
    throw std::logic_error("no relation " + relation);
}

const IdentityCheck& check_named(const RepresentationReport& r, const std::string& prefix)
{
    for (const auto& c : r.checks)
        if (c.name.rfind(prefix, 0) == 0) return c;
    throw std::logic_error("no check " + prefix);
}

}  // namespace

TEST_CASE("boundary representation of the line")
{
    auto g = load("g_line").graph;
    auto rep = boundary_representation(g);
    REQUIRE(rep.dimension() == 2);
    auto w = *rep.index_of(Path::vertex(g->vertex("w")));
    auto e = *rep.index_of(Path::edge(*g, g->edge("e")));
    const auto& s = rep.s[g->edge("e").index];
    CHECK(s(e, w) == 1);
    CHECK(s(w, e) == 0);
    CHECK(s(e, e) == 0);
    for (const auto& d : rep.defects) CHECK(d.max_abs == 0);
}

TEST_CASE("boundary representation of the fork and of a point")
{
    auto g = load("g_fork").graph;
    auto rep = boundary_representation(g);
    CHECK(rep.dimension() == 4);
    const auto& se = rep.s[g->edge("e").index];
    const auto& sf = rep.s[g->edge("f").index];
    CHECK(rep.p[g->vertex("v").index] == se * se.adjoint() + sf * sf.adjoint());

    auto point = std::make_shared<const Graph>(std::vector<std::string>{"v"}, std::vector<EdgeSpec>{});
    auto pr = boundary_representation(point);
    CHECK(pr.dimension() == 1);
    CHECK(pr.p[0] == Matrix<Rational>::identity(1));
}

TEST_CASE("cyclic graphs need the truncated representation")
{
    CHECK_THROWS_WITH_AS(boundary_representation(load("g_loop").graph), doctest::Contains("truncated_representation"),
                         PreconditionError);
}

TEST_CASE("truncated shift on a loop")
{
    auto g = load("g_loop").graph;
    const std::size_t n = 5;
    auto rep = truncated_representation(g, n);
    CHECK(rep.dimension() == n + 1);
    CHECK_FALSE(rep.exact);
    const auto& d = defect(rep, "S_e^* S_e = P_v");
    CHECK(d.max_abs == 1);
    CHECK(d.on_frontier);
    CHECK(d.normalized_hs == Rational(1, static_cast<long>(n + 1)));
    CHECK(defect(rep, "P_v = sum_{r(e)=v} S_e S_e^*").on_frontier);
}

TEST_CASE("truncated defects of two loops sit on the frontier")
{
    auto rep = truncated_representation(load("g_2loop").graph, 3);
    bool some_defect = false;
    for (const auto& d : rep.defects) {
        CHECK(d.on_frontier);
        some_defect = some_defect || d.max_abs != 0;
    }
    CHECK(some_defect);
}

TEST_CASE("property: truncated representations of acyclic graphs are exact")
{
    auto fail = gen::first_failure(100, 60, [](std::mt19937_64& rng) {
        auto g = random_graph(rng, {6, 8, RandomGraphOptions::Shape::acyclic});
        auto exact = boundary_representation(g);
        auto truncated = truncated_representation(g, g->vertex_count());
        return truncated.exact && truncated.basis == exact.basis && truncated.s == exact.s;
    });
    CHECK_MESSAGE(!fail, "first failing seed: " << fail.value_or(0));
}

TEST_CASE("square roots of rationals")
{
    auto r = exact_square_root(Rational(1, 2));
    REQUIRE(r);
    CHECK(r->first == Rational(1, 2));
    CHECK(r->second == 2);
    auto nine = exact_square_root(Rational(9, 4));
    REQUIRE(nine);
    CHECK(nine->first == Rational(3, 2));
    CHECK(nine->second == 1);
    auto twelve = exact_square_root(Rational(12));
    REQUIRE(twelve);
    CHECK(twelve->first == 2);
    CHECK(twelve->second == 3);
}

TEST_CASE("u as a partial isometry")
{
    auto line = load("g_line");
    auto rl = boundary_representation(line.graph);
    auto ul = build_u(rl, *line.weights);
    REQUIRE(ul.exact());
    CHECK(ul.partial_isometry);
    CHECK(std::get<Matrix<QuadraticSurd>>(ul.matrix) == convert<QuadraticSurd>(rl.s[0]));

    auto two = load("g_2loop");
    auto rt = truncated_representation(two.graph, 3);
    auto half = build_u(rt, *two.weights);
    REQUIRE(half.exact());
    CHECK(half.radicand == 2);
    CHECK(half.partial_isometry);
    CHECK(half.normalized);

    auto heavy = build_u(rt, WeightSystem::constant(*two.graph, Rational(1)));
    CHECK_FALSE(heavy.partial_isometry);
    CHECK_FALSE(heavy.normalized);
}

TEST_CASE("u^* u on a boundary representation")
{
    auto two = load("g_2loop");
    // Away from the frontier, u^* u = P_v for weights 1/2 and 2 P_v for weights 1.
    auto rep = truncated_representation(two.graph, 3);
    auto u = std::get<Matrix<QuadraticSurd>>(build_u(rep, WeightSystem::constant(*two.graph, Rational(1))).matrix);
    auto uu = u.adjoint() * u;
    for (std::size_t i = 0; i < rep.dimension(); ++i)
        if (rep.basis[i].length() < 3) CHECK(uu(i, i) == QuadraticSurd(Rational(2)));
}

TEST_CASE("property: u^* u is a projection exactly when every emitter is normalized")
{
    std::size_t both[2] = {0, 0};
    auto fail = gen::first_failure(200, 80, [&](std::mt19937_64& rng) {
        auto g = random_graph(rng, {5, 6, RandomGraphOptions::Shape::acyclic});
        WeightSystem w = draw(rng, 0, 1) ? WeightSystem::uniform(*g) : random_weights(rng, *g, 3);
        auto u = build_u(boundary_representation(g), w);
        ++both[u.partial_isometry];
        return u.partial_isometry == u.normalized;
    });
    CHECK_MESSAGE(!fail, "first failing seed: " << fail.value_or(0));
    CHECK(both[0] > 0);
    CHECK(both[1] > 0);
}

TEST_CASE("representation identities on fixtures")
{
    auto line = load("g_line");
    auto r = verify_representation(boundary_representation(line.graph), *line.weights, 2);
    CHECK(r.passed());
    CHECK(r.mode == "exact");
    for (const auto& c : r.checks) {
        CHECK_FALSE(c.skipped);
        CHECK(c.residual == 0);
    }

    auto fork = load("g_fork");
    auto f = verify_representation(boundary_representation(fork.graph), *fork.weights, 2);
    CHECK(f.passed());
    CHECK(f.mode == "float128");
    CHECK(check_named(f, "u pi(a) u^*").skipped);
    CHECK_FALSE(check_named(f, "u^* pi(a) u").skipped);
}

TEST_CASE("representation identities detect wrong weights")
{
    auto fork = load("g_fork");
    VerifyOptions opt;
    opt.transfer_weights = WeightSystem(*fork.graph, {Rational(1, 2), Rational(1, 2)});
    auto r = verify_representation(boundary_representation(fork.graph), *fork.weights, 2, opt);
    CHECK_FALSE(r.passed());
    const auto& c = check_named(r, "u^* pi(a) u");
    CHECK_FALSE(c.passed);
    REQUIRE(c.witness);
    CHECK(c.residual > 1e-3L);
    CHECK_NOTHROW(verify_representation_strict(boundary_representation(fork.graph),
                                               WeightSystem::constant(*fork.graph, Rational(1, 4)), 2));
}

TEST_CASE("property: identities hold on random acyclic graphs in both arithmetic modes")
{
    auto fail = gen::first_failure(300, 40, [](std::mt19937_64& rng) {
        auto g = random_graph(rng, {5, 6, RandomGraphOptions::Shape::acyclic});
        auto w = random_weights(rng, *g, 4);
        auto rep = boundary_representation(g);
        VerifyOptions opt;
        opt.force_float = draw(rng, 0, 1) == 1;
        auto r = verify_representation(rep, w, 3, opt);
        for (const auto& c : r.checks)
            if (!c.skipped && c.residual >= 1e-18L) return false;
        return r.passed();
    });
    CHECK_MESSAGE(!fail, "first failing seed: " << fail.value_or(0));
}

TEST_CASE("gauge grading")
{
    for (const auto& id : verified_identity_list()) {
        bool zero = id.rhs.tokens == std::vector<std::string>{"0"};
        if (!zero) CHECK_MESSAGE(gauge_degree(id.lhs) == gauge_degree(id.rhs), id.name);
    }
    CHECK(gauge_degree({{"u", "pi", "u*", "u"}}) == 1);
    CHECK_THROWS_AS(gauge_degree({{"x"}}), InputError);
    CHECK(gauge_scaling_holds(boundary_representation(load("g_fork").graph)));
    CHECK(gauge_scaling_holds(truncated_representation(load("g_2loop").graph, 3)));
}

TEST_CASE("redundancies on the line")
{
    auto line = load("g_line");
    auto rep = boundary_representation(line.graph);
    auto pair = boundary_pair(rep, *line.weights);
    auto pi = [&](const DiagElement& a) { return convert<QuadraticSurd>(rep.pi(a)); };

    auto qv = DiagElement::projection(line.graph, Path::vertex(line.graph->vertex("v")));
    auto rv = redundancy_test(pair, pi(qv));
    CHECK(rv.exists);
    CHECK(rv.member);
    REQUIRE(rv.k);
    CHECK(*rv.k == pi(qv));

    auto qw = DiagElement::projection(line.graph, Path::vertex(line.graph->vertex("w")));
    auto rw = redundancy_test(pair, pi(qw));
    CHECK(rw.exists);
    CHECK_FALSE(rw.member);
    REQUIRE(rw.k);
    CHECK(rw.k->is_zero());

    auto r0 = redundancy_test(pair, Matrix<QuadraticSurd>(2, 2));
    CHECK(r0.member);
    CHECK(r0.k->is_zero());
}

TEST_CASE("covariance ideals of endomorphism pairs")
{
    RepPair<Rational> id;
    for (std::size_t i = 0; i < 3; ++i) {
        Matrix<Rational> e(3, 3);
        e(i, i) = 1;
        id.atom_images.push_back(e);
    }
    id.s = Matrix<Rational>::identity(3);
    CHECK(endo_covariance_ideal(id, Endomorphism::identity(3)).ideal == std::vector<std::size_t>{0, 1, 2});

    auto zero = id;
    zero.s = Matrix<Rational>(3, 3);
    CHECK(endo_covariance_ideal(zero, Endomorphism({std::nullopt, std::nullopt, std::nullopt})).ideal.empty());

    auto line = load("g_line");
    auto rep = boundary_representation(line.graph);
    auto pair = boundary_pair(rep, *line.weights);
    // Boundary points are ordered w, e; S^* pi(chi_e) S = pi(chi_w).
    auto j = endo_covariance_ideal(pair, Endomorphism({1, std::nullopt}));
    CHECK(j.ideal == std::vector<std::size_t>{1});
    CHECK(j.redundancy_agrees);

    CHECK_THROWS_AS(endo_covariance_ideal(pair, Endomorphism::identity(2)), PreconditionError);
}

TEST_CASE("truncated windows are verified on their interior")
{
    auto two = load("g_2loop");
    auto rep = truncated_representation(two.graph, 3);
    auto r = verify_representation(rep, *two.weights, 3);
    CHECK(r.interior_only);
    CHECK_FALSE(r.exact_basis);
    CHECK(r.passed());

    VerifyOptions opt;
    opt.transfer_weights = WeightSystem::constant(*two.graph, Rational(1));
    auto bad = verify_representation(rep, *two.weights, 3, opt);
    CHECK_FALSE(check_named(bad, "u^* pi(a) u").passed);

    auto fork = load("g_fork");
    CHECK_FALSE(verify_representation(boundary_representation(fork.graph), *fork.weights, 2).interior_only);
}

TEST_CASE("covariance ideals of the edge isometries")
{
    auto fork = load("g_fork");
    auto rep = boundary_representation(fork.graph);
    auto checks = edge_covariance_checks(rep);
    REQUIRE(checks.size() == 2);
    for (const auto& c : checks) {
        CHECK(c.ideal_is_cylinder);
        CHECK(c.report.redundancy_agrees);
        REQUIRE(c.report.ideal.size() == 1);
        const Path& p = rep.basis[c.report.ideal.front()];
        CHECK(p.length() == 1);
        CHECK(fork.graph->name(p.first_edge()) == c.edge);
    }
    CHECK_THROWS_AS(edge_covariance_checks(truncated_representation(load("g_2loop").graph, 2)), PreconditionError);

    auto fail = gen::first_failure(900, 30, [](std::mt19937_64& rng) {
        auto g = random_graph(rng, {6, 7, RandomGraphOptions::Shape::acyclic});
        for (const auto& c : edge_covariance_checks(boundary_representation(g)))
            if (!c.ideal_is_cylinder || !c.report.redundancy_agrees) return false;
        return true;
    });
    CHECK_MESSAGE(!fail, "first failing seed: " << fail.value_or(0));
}
