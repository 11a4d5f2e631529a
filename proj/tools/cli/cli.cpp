#include "cli/cli.hpp"

#include "cli/reports.hpp"
#include "cpcross/error.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <thread>

namespace cpcross::cli {

namespace {

// Reads manifests such as {"graph": {"classify": {"file": "g.json", "depth": 3}}}.
// Nested objects address subcommands; arrays become repeated inputs.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override
    {
        return dump(app, default_also).dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override
    {
        Json j;
        try {
            j = Json::parse(input);
        } catch (const Json::parse_error& e) {
            throw CLI::ConversionError("malformed JSON config: " + std::string(e.what()));
        }
        if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        flatten(j, {}, items);
        return items;
    }

private:
    static std::string scalar(const Json& v)
    {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static void flatten(const Json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& items)
    {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                auto next = parents;
                next.push_back(key);
                // Marks the subcommand as used so the manifest alone can select it.
                CLI::ConfigItem open;
                open.parents = next;
                open.name = "++";
                items.push_back(std::move(open));
                flatten(value, next, items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array())
                for (const auto& x : value) item.inputs.push_back(scalar(x));
            else
                item.inputs.push_back(scalar(value));
            items.push_back(std::move(item));
        }
    }

    static Json dump(const CLI::App* app, bool default_also)
    {
        Json out = Json::object();
        for (const CLI::Option* opt : app->get_options()) {
            if (!opt->get_configurable()) continue;
            std::string name = opt->get_single_name();
            if (name.empty() || name == "help" || name == "config") continue;
            auto results = opt->results();
            if (results.empty() && default_also && !opt->get_default_str().empty())
                results.push_back(opt->get_default_str());
            if (results.empty()) continue;
            out[name] = results.size() == 1 ? Json(results.front()) : Json(results);
        }
        for (const CLI::App* sub : app->get_subcommands({}))
            if (sub->parsed()) out[sub->get_name()] = dump(sub, default_also);
        return out;
    }
};

struct Options {
    std::string file;
    std::string lambda = "auto";
    std::string transfer_lambda;
    std::string subalgebra;
    std::string alpha;
    std::string lazy;
    std::string lambda_start = "1";
    std::string ratio = "1";
    std::string write_dir;
    std::size_t depth = 3;
    std::size_t budget = 64;
    std::size_t jobs = 1;
    bool table = false;
    bool decimal = false;
    bool matrices = false;
    bool classify = false;
    std::vector<std::size_t> support;
};

struct Outcome {
    Json report;
    int code = 0;
};

WeightSystem resolve_lambda(const GraphDocument& doc, const std::string& spec, bool decimal)
{
    const Graph& g = *doc.graph;
    if (spec == "auto") return doc.weights ? *doc.weights : WeightSystem::uniform(g);
    if (spec == "uniform") return WeightSystem::uniform(g);
    if (spec == "doc") {
        if (!doc.weights) throw InputError("graph document has no \"lambda\" weights; pass --lambda uniform or a constant");
        return *doc.weights;
    }
    return WeightSystem::constant(g, parse_rational(spec, decimal));
}

std::string lambda_source(const GraphDocument& doc, const std::string& spec)
{
    if (spec == "auto") return doc.weights ? "doc" : "uniform";
    return spec;
}

Json header(const std::string& command, const Options& o)
{
    Json h = {{"command", command}};
    if (!o.file.empty()) h["input"] = o.file;
    return h;
}

Json graph_summary(const Graph& g)
{
    return {{"vertices", g.vertex_count()}, {"edges", g.edge_count()}, {"acyclic", g.is_acyclic()}};
}

void merge(Json& into, const Json& from)
{
    for (const auto& [k, v] : from.items()) into[k] = v;
}

bool failing(Verdict v) { return v == Verdict::fails_on_truncation_evidence; }

Outcome check_lambda(const Options& o)
{
    Outcome out{header("graph check-lambda", o)};
    ConditionReport r;
    if (!o.lazy.empty()) {
        auto start = parse_rational(o.lambda_start, o.decimal);
        auto ratio = parse_rational(o.ratio, o.decimal);
        LazyGraph g = o.lazy == "rose" ? LazyGraph::rose(start, ratio)
                      : o.lazy == "star" ? LazyGraph::star(start, ratio)
                                         : throw InputError("unknown lazy family '" + o.lazy + "' (rose, star)");
        r = check_lambda_conditions(g, o.budget);
        auto v = classify_vertices(g, o.budget);
        out.report["graph"] = {{"lazy", g.description()}, {"budget", o.budget}};
        out.report["infinite_receivers"] = v.infinite_receivers;
        out.report["infinite_emitters"] = v.infinite_emitters;
        out.report["suspected"] = v.suspected;
    } else {
        if (o.file.empty()) throw InputError("check-lambda needs a graph file or --lazy rose|star");
        auto doc = load_graph(o.file, o.decimal);
        auto lambda = resolve_lambda(doc, o.lambda, o.decimal);
        r = check_lambda_conditions(*doc.graph, lambda);
        out.report["graph"] = graph_summary(*doc.graph);
        out.report["lambda_source"] = lambda_source(doc, o.lambda);
        out.report["lambda"] = weights_json(*doc.graph, lambda);
    }
    out.report["conditions"] = to_json(r);
    out.code = failing(r.bounded) || failing(r.vanishing) ? 2 : 0;
    return out;
}

Outcome classify(const Options& o)
{
    Outcome out{header("graph classify", o)};
    auto doc = load_graph(o.file, o.decimal);
    auto lambda = resolve_lambda(doc, o.lambda, o.decimal);
    auto c = classify_system(doc.graph, lambda, o.depth);
    out.report["graph"] = graph_summary(*doc.graph);
    out.report["lambda_source"] = lambda_source(doc, o.lambda);
    out.report["lambda"] = weights_json(*doc.graph, lambda);
    merge(out.report, to_json(*doc.graph, c));
    out.report["transfer_identity"] = to_json(*doc.graph, verify_transfer_identity(doc.graph, lambda, o.depth));
    out.code = c.is_exel_system && out.report["transfer_identity"]["passed"].get<bool>() ? 0 : 2;
    return out;
}

Outcome ideals(const Options& o)
{
    Outcome out{header("graph ideals", o)};
    auto doc = load_graph(o.file, o.decimal);
    auto lambda = resolve_lambda(doc, o.lambda, o.decimal);
    out.report["graph"] = graph_summary(*doc.graph);
    out.report["lambda_source"] = lambda_source(doc, o.lambda);
    out.report["ideals"] = to_json(*doc.graph, compute_ideals(doc.graph, lambda, o.depth));
    out.report["covariance_span"] = to_json(covariance_span_check(doc.graph, o.depth));
    out.report["multiplicative_domain"] = to_json(*doc.graph, multiplicative_domain_truncated(doc.graph, lambda, o.depth));
    return out;
}

Json gauge_json(const MatrixRep& rep)
{
    Json ids = Json::array();
    for (const auto& id : verified_identity_list()) {
        bool zero = id.rhs.tokens == std::vector<std::string>{"0"};
        int l = gauge_degree(id.lhs);
        int r = gauge_degree(id.rhs);
        ids.push_back({{"name", id.name}, {"lhs_degree", l}, {"rhs_degree", zero ? Json(nullptr) : Json(r)},
                       {"balanced", zero || l == r}});
    }
    return {{"scaling_holds", gauge_scaling_holds(rep)}, {"identities", std::move(ids)}};
}

Outcome represent(const Options& o)
{
    Outcome out{header("graph represent", o)};
    auto doc = load_graph(o.file, o.decimal);
    auto lambda = resolve_lambda(doc, o.lambda, o.decimal);
    const Graph& g = *doc.graph;
    MatrixRep rep = g.is_acyclic() ? boundary_representation(doc.graph) : truncated_representation(doc.graph, o.depth);
    UOperator u = build_u(rep, lambda, o.decimal);
    VerifyOptions options;
    options.force_float = o.decimal;
    if (!o.transfer_lambda.empty()) {
        GraphDocument alt = doc;
        options.transfer_weights = resolve_lambda(alt, o.transfer_lambda, o.decimal);
    }
    auto report = verify_representation(rep, lambda, o.depth, options);

    out.report["graph"] = graph_summary(g);
    out.report["lambda_source"] = lambda_source(doc, o.lambda);
    out.report["lambda"] = weights_json(g, lambda);
    if (options.transfer_weights) out.report["transfer_lambda"] = weights_json(g, *options.transfer_weights);
    out.report["representation"] = to_json(rep);
    out.report["u"] = to_json(u, o.matrices);
    out.report["verification"] = to_json(report);
    out.report["gauge"] = gauge_json(rep);
    bool ok = report.passed();
    if (rep.exact && !rep.depth) {
        Json cov = Json::array();
        for (const auto& c : edge_covariance_checks(rep)) {
            cov.push_back({{"edge", c.edge},
                           {"beta", to_json(c.beta)},
                           {"ideal", c.report.ideal},
                           {"ideal_is_cylinder", c.ideal_is_cylinder},
                           {"redundancy_agrees", c.report.redundancy_agrees}});
            ok = ok && c.ideal_is_cylinder && c.report.redundancy_agrees;
        }
        out.report["covariance_ideals"] = std::move(cov);
    }
    if (o.matrices) {
        Json s = Json::object(), p = Json::object();
        for (auto e : g.edges()) s[g.name(e)] = matrix_to_json(rep.s[e.index]);
        for (auto v : g.vertices()) p[g.name(v)] = matrix_to_json(rep.p[v.index]);
        out.report["matrices"] = {{"S", std::move(s)}, {"P", std::move(p)}};
    }
    out.code = ok ? 0 : 2;
    return out;
}

bool is_graph_document(const std::string& file)
{
    if (std::filesystem::path(file).extension() == ".csv") return false;
    Json j = read_json_file(file);
    return j.is_object() && j.contains("vertices");
}

PositiveMapMatrix load_map(const Options& o, Json& report)
{
    if (is_graph_document(o.file)) {
        auto doc = load_graph(o.file, o.decimal);
        auto lambda = resolve_lambda(doc, o.lambda, o.decimal);
        auto atoms = truncation_atoms(*doc.graph, o.depth);
        report["truncation"] = {{"depth", o.depth}, {"atoms", paths_json(*doc.graph, atoms)}};
        return truncated_transfer_matrix(doc.graph, lambda, o.depth);
    }
    auto m = load_matrix(o.file, o.decimal);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (sgn(m(i, j)) < 0) throw InputError("positive map needs nonnegative entries; M[" + std::to_string(i) + "," + std::to_string(j) + "] < 0");
    return PositiveMapMatrix(std::move(m));
}

Outcome analyze(const Options& o)
{
    Outcome out{header("cp analyze", o)};
    auto m = load_map(o, out.report);
    const std::size_t n = m.size();
    std::vector<std::size_t> support = o.support;
    if (support.empty())
        for (std::size_t i = 0; i < n; ++i) support.push_back(i);
    for (auto x : support)
        if (x >= n) throw InputError("support point " + std::to_string(x) + " out of range");
    out.report["points"] = n;
    out.report["op_norm"] = to_string(op_norm(m));
    out.report["gns_kernel"] = to_json(gns_kernel(m));
    out.report["multiplicative_domain"] = to_json(multiplicative_domain(m));
    out.report["faithfulness"] = to_json(faithfulness_report(m, support));
    out.report["faithfulness"]["support"] = support;
    out.report["support_relation"] = to_json(support_relation(m));
    out.report["katsura_ideal"] = katsura_ideal(m);
    if (!o.subalgebra.empty()) {
        auto b = subalgebra_from_json(n, read_json_file(o.subalgebra));
        auto ce = is_conditional_expectation(m, b);
        out.report["subalgebra"] = to_json(b);
        out.report["conditional_expectation"] = to_json(ce);
        out.code = ce.is_conditional_expectation ? 0 : 2;
    }
    return out;
}

Outcome quiver_cmd(const Options& o)
{
    Outcome out{header("cp quiver", o)};
    auto m = load_map(o, out.report);
    auto q = quiver(m);
    out.report["points"] = m.size();
    out.report["support_relation"] = to_json(support_relation(m));
    out.report["quiver"] = to_json(q);
    out.report["rebuild_matches"] = rebuild_map(q).matrix() == m.matrix();
    out.report["correspondence_comparison"] = to_json(quiver_dimension_check(m));
    return out;
}

Outcome correspondence(const Options& o)
{
    Outcome out{header("cp correspondence", o)};
    auto m = load_map(o, out.report);
    auto x = gns_correspondence(m);
    merge(out.report, to_json(x));
    out.report["katsura_ideal"] = katsura_ideal(m);
    out.report["compact_frame"] = to_json(compact_operator_frame(x));
    return out;
}

Outcome enumerate(const Options& o)
{
    Outcome out{header("exel enumerate-regular", o)};
    auto m = load_map(o, out.report);
    out.report["points"] = m.size();
    auto e = enumerate_regular_endomorphisms(m);
    merge(out.report, to_json(e));
    out.code = e.endomorphisms.empty() ? 2 : 0;
    if (!o.alpha.empty()) {
        auto a = load_matrix(o.alpha, o.decimal);
        if (a.rows() != m.size() || a.cols() != m.size())
            throw InputError("alpha must be a " + std::to_string(m.size()) + "x" + std::to_string(m.size()) + " matrix");
        out.report["alpha"] = {{"matrix", matrix_to_json(a)}};
        std::optional<Endomorphism> alpha;
        try {
            alpha = Endomorphism::from_matrix(a);
        } catch (const InputError& e) {
            out.report["alpha"]["is_endomorphism"] = false;
            out.report["alpha"]["witness"] = e.what();
            out.code = 2;
            return out;
        }
        auto pair = check_transfer_pair(*alpha, m);
        out.report["alpha"]["is_endomorphism"] = true;
        out.report["alpha"]["pair"] = to_json(pair);
        if (pair.is_exel)
            out.report["alpha"]["module"] = to_json(exel_module_iso_check(*alpha, m));
        else
            out.code = 2;
    }
    return out;
}

Json fixture_entry(const CorpusEntry& c, const Options& o)
{
    Json j = {{"name", c.name}, {"kind", c.kind}, {"seed", c.seed ? Json(*c.seed) : Json(nullptr)}};
    merge(j, graph_summary(*c.graph));
    j["lambda"] = weights_json(*c.graph, c.lambda);
    if (o.classify) {
        try {
            auto cls = classify_system(c.graph, c.lambda, o.depth);
            j["classification"] = {{"is_exel", cls.is_exel_system},
                                   {"is_regular", cls.is_regular},
                                   {"is_corner", cls.is_corner},
                                   {"witness", cls.witness ? Json(*cls.witness) : Json(nullptr)}};
        } catch (const PreconditionError& e) {
            j["classification"] = {{"error", e.what()}};
        }
    }
    return j;
}

Outcome fixtures_list(const Options& o)
{
    Outcome out{{{"command", "fixtures list"}}};
    auto corpus = full_corpus();
    std::vector<Json> rows(corpus.size());
    std::vector<std::exception_ptr> errors(corpus.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < corpus.size();) {
            try {
                rows[i] = fixture_entry(corpus[i], o);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < std::max<std::size_t>(o.jobs, 1); ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    if (o.classify) out.report["depth"] = o.depth;
    out.report["fixtures"] = rows;

    if (!o.write_dir.empty()) {
        std::filesystem::create_directories(o.write_dir);
        Json written = Json::array();
        for (const auto& c : corpus) {
            if (c.kind == "fixture") continue;
            auto path = std::filesystem::path(o.write_dir) / (c.name + ".json");
            std::ofstream f(path);
            if (!f) throw InputError("cannot write " + path.string());
            f << graph_to_json(*c.graph, &c.lambda).dump(2) << "\n";
            written.push_back(path.string());
        }
        out.report["written"] = std::move(written);
    }
    return out;
}

void emit(const Json& report, bool table, std::ostream& out)
{
    if (table)
        out << render_table(report);
    else
        out << report.dump(2) << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Transfer operators, Exel systems and completely positive maps on finite data", "cpcross"};
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON manifest with option values, nested by subcommand");
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* c) {
        c->add_flag("--table", o.table, "Human-readable output instead of JSON");
        c->add_flag("--float", o.decimal, "Accept decimal literals and use 128-bit floating point for square roots");
    };
    auto add_graph = [&](CLI::App* c, bool required) {
        auto* f = c->add_option("file", o.file, "Graph JSON document");
        if (required) f->required();
        c->add_option("--lambda", o.lambda, "Weights: auto, doc, uniform or a rational constant")->capture_default_str();
        c->add_option("--depth", o.depth, "Path depth for basis checks and truncations")->capture_default_str();
        add_common(c);
    };
    auto add_matrix = [&](CLI::App* c) {
        c->add_option("file", o.file, "Matrix (JSON or CSV) or graph JSON document")->required();
        c->add_option("--lambda", o.lambda, "Weights when the input is a graph")->capture_default_str();
        c->add_option("--depth", o.depth, "Truncation depth when the input is a graph")->capture_default_str();
        add_common(c);
    };

    auto* graph = app.add_subcommand("graph", "Graph documents")->require_subcommand(1);
    auto* check = graph->add_subcommand("check-lambda", "Boundedness and vanishing conditions on lambda");
    add_graph(check, false);
    check->add_option("--lazy", o.lazy, "Countable family instead of a file: rose or star");
    check->add_option("--lambda-start", o.lambda_start, "First weight of the lazy family")->capture_default_str();
    check->add_option("--ratio", o.ratio, "Ratio between consecutive lazy weights")->capture_default_str();
    check->add_option("--budget", o.budget, "Edges enumerated from a lazy family")->capture_default_str();
    auto* cls = graph->add_subcommand("classify", "Exel, regular and corner classification");
    add_graph(cls, true);
    auto* ids = graph->add_subcommand("ideals", "Kernel, Katsura and multiplicative-domain ideals");
    add_graph(ids, true);
    auto* rep = graph->add_subcommand("represent", "Verify covariance relations in a matrix representation");
    add_graph(rep, true);
    rep->add_option("--transfer-lambda", o.transfer_lambda, "Weights for L in the checks, to test a mismatched pair");
    rep->add_flag("--matrices", o.matrices, "Include S_e, P_v and u in the report");

    auto* cp = app.add_subcommand("cp", "Completely positive maps on C^n")->require_subcommand(1);
    auto* an = cp->add_subcommand("analyze", "Norm, GNS kernel, multiplicative domain and faithfulness");
    add_matrix(an);
    an->add_option("--subalgebra", o.subalgebra, "Subalgebra document to test as conditional expectation range");
    an->add_option("--support", o.support, "Support points of the ideal for faithfulness checks");
    auto* qv = cp->add_subcommand("quiver", "Support relation and weighted quiver");
    add_matrix(qv);
    auto* co = cp->add_subcommand("correspondence", "GNS correspondence");
    add_matrix(co);

    auto* exel = app.add_subcommand("exel", "Exel systems on C^n")->require_subcommand(1);
    auto* en = exel->add_subcommand("enumerate-regular", "All alpha making (C^n, alpha, L) regular");
    add_matrix(en);
    en->add_option("--alpha", o.alpha, "Endomorphism matrix to check against L");

    auto* fix = app.add_subcommand("fixtures", "Shipped corpus")->require_subcommand(1);
    auto* list = fix->add_subcommand("list", "Named fixtures and seeded regression graphs");
    list->add_flag("--classify", o.classify, "Classify every entry");
    list->add_option("--depth", o.depth, "Classification depth")->capture_default_str();
    list->add_option("--jobs", o.jobs, "Parallel classification workers")->capture_default_str()->check(CLI::Range(1, 256));
    list->add_option("--write", o.write_dir, "Write every corpus graph as JSON into this directory");
    list->add_flag("--table", o.table, "Human-readable output instead of JSON");

    for (auto* c : {graph, check, cls, ids, rep, cp, an, qv, co, exel, en, fix, list}) c->configurable()->fallthrough();

    const std::vector<std::pair<CLI::App*, std::function<Outcome(const Options&)>>> actions = {
        {check, check_lambda}, {cls, classify},         {ids, ideals},   {rep, represent},
        {an, analyze},         {qv, quiver_cmd},        {co, correspondence},
        {en, enumerate},       {list, fixtures_list}};

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        const CLI::App* level = &app;
        for (const auto& a : args) {
            if (a.starts_with("-")) break;
            const CLI::App* sub = nullptr;
            for (const CLI::App* c : level->get_subcommands({}))
                if (c->get_name() == a) sub = c;
            if (!sub) {
                if (!level->get_subcommands({}).empty()) {
                    err << "error: unknown subcommand '" << a << "'\n";
                    return 1;
                }
                break;
            }
            level = sub;
        }
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        for (const auto& [sub, action] : actions) {
            if (!sub->parsed()) continue;
            Outcome r = action(o);
            emit(r.report, o.table, out);
            return r.code;
        }
        err << "error: no subcommand given\n";
        return 1;
    } catch (const InvariantViolation& e) {
        err << "error: internal invariant violated: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace cpcross::cli
