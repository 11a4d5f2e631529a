#include "reports.hpp"

#include <cstdio>
#include <sstream>

namespace cpcross::cli {

namespace {

template <class T>
Json optional_json(const std::optional<T>& v)
{
    return v ? Json(*v) : Json(nullptr);
}

Json index_list(const std::vector<std::size_t>& v) { return Json(v); }

Json matrix_json(const Matrix<QuadraticSurd>& m)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

Json matrix_json(const Matrix<Float128>& m)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json sums_json(const std::vector<VertexSum>& sums)
{
    Json out = Json::array();
    for (const auto& s : sums) out.push_back({{"vertex", s.vertex}, {"sum", to_string(s.value)}, {"terms", s.terms}});
    return out;
}

}  // namespace

Json residual_json(long double r)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6Le", r);
    return buf;
}

Json paths_json(const Graph& g, const std::vector<Path>& ps)
{
    Json out = Json::array();
    for (const auto& p : ps) out.push_back(p.str(g));
    return out;
}

Json weights_json(const Graph& g, const WeightSystem& w)
{
    Json out = Json::object();
    for (auto e : g.edges()) out[g.name(e)] = to_string(w[e]);
    return out;
}

Json to_json(const ConditionReport& r)
{
    return {{"bounded", to_string(r.bounded)},
            {"vanishing", to_string(r.vanishing)},
            {"sup", to_string(r.sup)},
            {"emitter_sums", sums_json(r.emitter_sums)},
            {"budget", optional_json(r.budget)},
            {"note", r.note}};
}

Json to_json(const Graph& g, const TransferIdentityReport& r)
{
    Json w = nullptr;
    if (r.witness)
        w = {{"mu", r.witness->mu.str(g)},
             {"nu", r.witness->nu.str(g)},
             {"lhs", diag_to_json(r.witness->lhs)},
             {"rhs", diag_to_json(r.witness->rhs)}};
    return {{"passed", r.passed}, {"depth", r.depth}, {"pairs_checked", r.pairs_checked}, {"pairs_vanishing", r.pairs_vanishing}, {"witness", std::move(w)}};
}

Json to_json(const Graph& g, const SystemClassification& c)
{
    Json w = nullptr;
    if (c.witness) {
        w = {{"text", *c.witness}};
        if (c.witness_path) w["path"] = c.witness_path->str(g);
        if (c.witness_factor) w["factor"] = to_string(*c.witness_factor);
        if (c.witness_lhs) w["lhs"] = diag_to_json(*c.witness_lhs);
        if (c.witness_rhs) w["rhs"] = diag_to_json(*c.witness_rhs);
    }
    return {{"is_exel", c.is_exel_system},
            {"is_regular", c.is_regular},
            {"is_corner", c.is_corner},
            {"depth", c.depth},
            {"methods",
             {{"regular_by_normalization", c.regular_by_normalization},
              {"normalized_at_every_vertex", c.normalized_at_every_vertex},
              {"regular_by_identity", c.regular_by_identity},
              {"corner_identity", c.corner_identity},
              {"hereditary_range", c.hereditary_range}}},
            {"emitter_sums", sums_json(c.emitter_sums)},
            {"witness", std::move(w)}};
}

Json to_json(const Graph& g, const IdealReport& r)
{
    return {{"depth", r.depth},
            {"depth_relative", r.depth_relative},
            {"n_l", paths_json(g, r.n_l)},
            {"n_l_perp", paths_json(g, r.n_l_perp)},
            {"j_xl", paths_json(g, r.j_xl)},
            {"n_l_perp_meet_j_xl", paths_json(g, r.intersection)},
            {"brute_force", {{"checked", r.brute_force_checked}, {"kernel_support", paths_json(g, r.brute_force_kernel)}}}};
}

Json to_json(const CovarianceSpanReport& r)
{
    return {{"equal", r.equal},
            {"depth", r.depth},
            {"products_dimension", r.products_dimension},
            {"generators_dimension", r.generators_dimension},
            {"joint_dimension", r.joint_dimension}};
}

Json to_json(const Graph& g, const TruncatedDomain& d)
{
    Json basis = Json::array();
    for (const auto& b : d.basis) basis.push_back(diag_to_json(b));
    return {{"depth", d.depth},
            {"atoms", paths_json(g, d.atoms)},
            {"blocks", d.subalgebra.blocks()},
            {"basis", std::move(basis)},
            {"depth_relative", d.depth_relative},
            {"corner_closed_form_checked", d.corner_closed_form_checked}};
}

Json to_json(const MatrixRep& rep)
{
    const Graph& g = *rep.graph;
    Json defects = Json::array();
    for (const auto& d : rep.defects)
        defects.push_back({{"relation", d.relation},
                           {"max_abs", residual_json(d.max_abs)},
                           {"normalized_hs", to_string(d.normalized_hs)},
                           {"on_frontier", d.on_frontier}});
    return {{"kind", rep.depth ? "truncated" : "boundary"},
            {"exact", rep.exact},
            {"depth", optional_json(rep.depth)},
            {"dimension", rep.dimension()},
            {"basis", paths_json(g, rep.basis)},
            {"frontier", index_list(rep.frontier)},
            {"defects", std::move(defects)}};
}

Json to_json(const UOperator& u, bool with_matrix)
{
    Json out = {{"mode", u.mode()},
                {"radicand", u.radicand},
                {"partial_isometry", u.partial_isometry},
                {"normalized", u.normalized}};
    if (with_matrix) {
        if (u.exact())
            out["matrix"] = matrix_json(std::get<Matrix<QuadraticSurd>>(u.matrix));
        else {
            out["matrix"] = matrix_json(std::get<Matrix<Float128>>(u.matrix));
            out["decimal_digits"] = 34;
        }
    }
    return out;
}

Json to_json(const RepresentationReport& r)
{
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"skipped", c.skipped},
                          {"instances", c.instances},
                          {"residual", residual_json(c.residual)},
                          {"witness", optional_json(c.witness)}});
    return {{"mode", r.mode}, {"exact_basis", r.exact_basis}, {"interior_only", r.interior_only}, {"passed", r.passed()}, {"checks", std::move(checks)}};
}

Json to_json(const Subalgebra& b) { return subalgebra_to_json(b); }

Json to_json(const GnsKernel& k) { return {{"zero_set", k.zero_set}, {"brute_force_agrees", k.brute_force_agrees}}; }

Json to_json(const MultiplicativeDomain& md)
{
    return {{"blocks", md.subalgebra.blocks()},
            {"dimension", md.subalgebra.dimension()},
            {"contractive", md.contractive},
            {"single_variable_cross_check", md.single_variable_cross_check}};
}

Json to_json(const FaithfulnessReport& f)
{
    return {{"faithful", f.faithful},
            {"faithful_on_generated_ideal", f.faithful_on_generated_ideal},
            {"faithful_on_hereditary", f.faithful_on_hereditary},
            {"almost_faithful", f.almost_faithful},
            {"witness_point", optional_json(f.witness)}};
}

Json to_json(const SupportRelation& r)
{
    Json pairs = Json::array();
    for (auto [x, y] : r.pairs) pairs.push_back({x, y});
    return {{"pairs", std::move(pairs)}, {"fibers", r.fibers}, {"domain", r.domain}};
}

Json to_json(const Quiver& q)
{
    Json edges = Json::array();
    for (const auto& e : q.edges) edges.push_back({{"source", e.source}, {"range", e.range}, {"weight", to_string(e.weight)}});
    return {{"vertices", q.vertices},
            {"edges", std::move(edges)},
            {"domain", q.domain},
            {"domain_proper", q.domain_proper},
            {"openness", q.openness}};
}

Json to_json(const QuiverDimensionReport& r)
{
    return {{"dimension", r.dimension},
            {"relation_size", r.relation_size},
            {"dimensions_equal", r.dimensions_equal},
            {"actions_match", r.actions_match},
            {"inner_products_match", r.inner_products_match},
            {"source_left_formula_matches", r.source_left_formula_matches}};
}

Json to_json(const ConditionalExpectationReport& r)
{
    return {{"is_conditional_expectation", r.is_conditional_expectation},
            {"first_failure", optional_json(r.first_failure)},
            {"detail", r.detail}};
}

Json to_json(const Correspondence& x)
{
    Json surviving = Json::array();
    Json gram = Json::array();
    for (auto [a, b] : x.surviving) {
        surviving.push_back({a, b});
        gram.push_back(to_string(x.gram(a * x.points + b, a * x.points + b)));
    }
    Json left = Json::array(), right = Json::array();
    for (const auto& m : x.left_action) left.push_back(matrix_to_json(m));
    for (const auto& m : x.right_action) right.push_back(matrix_to_json(m));
    return {{"dimension", x.dimension()},
            {"points", x.points},
            {"surviving", std::move(surviving)},
            {"gram_diagonal", std::move(gram)},
            {"gram_rank", x.gram_ldl.rank},
            {"left_kernel", x.left_kernel},
            {"left_action", std::move(left)},
            {"right_action", std::move(right)}};
}

Json to_json(const CompactFrame& f)
{
    return {{"generators", f.generators.size()},
            {"span_dimension", f.span_dimension},
            {"commutant_dimension", f.commutant_dimension},
            {"operator_dimension", f.operator_dimension}};
}

Json to_json(const Endomorphism& a)
{
    Json map = Json::array();
    for (const auto& t : a.point_map()) map.push_back(t ? Json(*t) : Json(nullptr));
    return map;
}

Json to_json(const RegularEnumeration& e)
{
    Json list = Json::array();
    for (const auto& r : e.endomorphisms)
        list.push_back({{"point_map", to_json(r.alpha)},
                        {"range", r.range.blocks()},
                        {"is_corner", r.is_corner},
                        {"transfer_faithful_on_generated_ideal", r.transfer_faithful_on_generated_ideal}});
    return {{"image_is_ideal", e.image_is_ideal},
            {"image_support", e.image_support},
            {"multiplicative_domain", e.multiplicative_domain.blocks()},
            {"count", e.endomorphisms.size()},
            {"endomorphisms", std::move(list)},
            {"reason", e.reason.empty() ? Json(nullptr) : Json(e.reason)}};
}

Json to_json(const TransferPairReport& r)
{
    return {{"is_exel", r.is_exel},
            {"is_regular", r.is_regular},
            {"is_corner", r.is_corner},
            {"hereditary_range", r.hereditary_range},
            {"witness", optional_json(r.witness)},
            {"regular_transfer_count", optional_json(r.regular_transfer_count)}};
}

Json to_json(const ModuleIsoReport& r)
{
    return {{"isometric", r.isometric},
            {"bimodule", r.bimodule},
            {"surjective", r.surjective},
            {"gns_dimension", r.gns_dimension},
            {"module_dimension", r.module_dimension},
            {"image_dimension", r.image_dimension},
            {"witness", optional_json(r.witness)}};
}

namespace {

void render(const Json& j, const std::string& key, std::ostringstream& out)
{
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) render(v, key.empty() ? k : key + "." + k, out);
    } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
        for (std::size_t i = 0; i < j.size(); ++i) render(j[i], key + "[" + std::to_string(i) + "]", out);
    } else {
        std::string v = j.is_string() ? j.get<std::string>() : j.dump();
        out << key << ": " << v << "\n";
    }
}

}  // namespace

std::string render_table(const Json& report)
{
    std::ostringstream out;
    render(report, "", out);
    return out.str();
}

}  // namespace cpcross::cli
