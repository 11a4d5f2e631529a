#include "cpcross/io.hpp"

#include "cpcross/error.hpp"

#include <fstream>
#include <sstream>

namespace cpcross {

namespace {

Rational rational_from_json(const Json& v, bool allow_decimal, const std::string& where)
{
    if (v.is_string()) return parse_rational(v.get<std::string>(), allow_decimal);
    if (v.is_number_integer()) return Rational(mpz_class(v.dump()));
    if (v.is_number_float()) {
        if (!allow_decimal)
            throw InputError(where + ": floating-point number " + v.dump() + " rejected; write \"p/q\" or pass --float");
        return parse_rational(v.dump(), true);
    }
    throw InputError(where + ": expected a rational, got " + v.dump());
}

const Json& require(const Json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key)) throw InputError(where + ": missing \"" + key + "\"");
    return obj.at(key);
}

std::string require_string(const Json& obj, const char* key, const std::string& where)
{
    const Json& v = require(obj, key, where);
    if (!v.is_string()) throw InputError(where + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

}  // namespace

Json read_json_file(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in) throw InputError("file not found: " + file.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError("malformed JSON in " + file.string() + ": " + e.what());
    }
}

GraphDocument graph_from_json(const Json& doc, bool allow_decimal)
{
    const Json& vs = require(doc, "vertices", "graph document");
    const Json& es = require(doc, "edges", "graph document");
    if (!vs.is_array() || !es.is_array()) throw InputError("graph document: \"vertices\" and \"edges\" must be arrays");

    std::vector<std::string> vertices;
    for (const auto& v : vs) {
        if (!v.is_string()) throw InputError("graph document: vertex names must be strings");
        vertices.push_back(v.get<std::string>());
    }
    std::vector<EdgeSpec> edges;
    std::vector<std::pair<std::string, Rational>> lambdas;
    for (const auto& e : es) {
        EdgeSpec spec{require_string(e, "id", "edge"), require_string(e, "src", "edge"), require_string(e, "rng", "edge")};
        if (e.contains("lambda"))
            lambdas.emplace_back(spec.id, rational_from_json(e.at("lambda"), allow_decimal, "edge " + spec.id));
        edges.push_back(std::move(spec));
    }
    auto graph = std::make_shared<const Graph>(std::move(vertices), std::move(edges));

    GraphDocument out{graph, std::nullopt};
    if (!lambdas.empty()) {
        if (lambdas.size() != graph->edge_count())
            throw InputError("graph document: \"lambda\" must be given for every edge or for none");
        std::vector<Rational> w(graph->edge_count());
        for (auto& [id, q] : lambdas) w[graph->edge(id).index] = q;
        out.weights = WeightSystem(*graph, std::move(w));
    }
    return out;
}

GraphDocument load_graph(const std::filesystem::path& file, bool allow_decimal)
{
    return graph_from_json(read_json_file(file), allow_decimal);
}

Json graph_to_json(const Graph& g, const WeightSystem* weights)
{
    Json doc;
    doc["vertices"] = Json::array();
    for (auto v : g.vertices()) doc["vertices"].push_back(g.name(v));
    doc["edges"] = Json::array();
    for (auto e : g.edges()) {
        Json edge{{"id", g.name(e)}, {"src", g.name(g.source(e))}, {"rng", g.name(g.range(e))}};
        if (weights) edge["lambda"] = to_string((*weights)[e]);
        doc["edges"].push_back(std::move(edge));
    }
    return doc;
}

Json path_to_json(const Graph& g, const Path& p)
{
    Json j;
    j["path"] = p.edge_names(g);
    if (p.is_vertex()) j["vertex"] = g.name(p.range());
    return j;
}

Json diag_to_json(const DiagElement& a)
{
    Json terms = Json::array();
    for (const auto& [p, c] : a.terms()) {
        Json t = path_to_json(a.graph(), p);
        t["coeff"] = to_string(c);
        terms.push_back(std::move(t));
    }
    return Json{{"terms", std::move(terms)}};
}

DiagElement diag_from_json(const GraphPtr& g, const Json& doc)
{
    const Json& terms = require(doc, "terms", "diagonal element");
    if (!terms.is_array()) throw InputError("diagonal element: \"terms\" must be an array");
    DiagElement a(g);
    for (const auto& t : terms) {
        const Json& names = require(t, "path", "term");
        std::vector<EdgeId> edges;
        for (const auto& n : names) {
            auto e = n.is_string() ? g->find_edge(n.get<std::string>()) : std::nullopt;
            if (!e) throw InputError("term: unknown edge " + n.dump());
            edges.push_back(*e);
        }
        Path p = [&] {
            if (!edges.empty()) return Path::from_edges(*g, edges);
            auto v = g->find_vertex(require_string(t, "vertex", "vertex term"));
            if (!v) throw InputError("vertex term: unknown vertex " + t.at("vertex").dump());
            return Path::vertex(*v);
        }();
        Rational c = t.contains("coeff") ? rational_from_json(t.at("coeff"), false, "term") : Rational(1);
        a.add_term(p, c);
    }
    return a;
}

Matrix<Rational> matrix_from_json(const Json& doc, bool allow_decimal)
{
    const Json& rows = doc.is_object() ? require(doc, "matrix", "matrix document") : doc;
    if (!rows.is_array() || rows.empty()) throw InputError("matrix document: expected a nonempty array of rows");
    const std::size_t cols = rows.front().is_array() ? rows.front().size() : 0;
    Matrix<Rational> m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].is_array() || rows[i].size() != cols)
            throw InputError("matrix document: row " + std::to_string(i) + " has the wrong length");
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = rational_from_json(rows[i][j], allow_decimal,
                                         "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    return m;
}

Matrix<Rational> matrix_from_csv(const std::string& text, bool allow_decimal)
{
    std::vector<std::vector<Rational>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<Rational> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            auto b = cell.find_first_not_of(" \t\r\"");
            auto e = cell.find_last_not_of(" \t\r\"");
            if (b == std::string::npos) throw InputError("CSV: empty cell in row " + std::to_string(rows.size()));
            row.push_back(parse_rational(cell.substr(b, e - b + 1), allow_decimal));
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw InputError("CSV: row " + std::to_string(rows.size()) + " has the wrong length");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError("CSV: no rows");
    Matrix<Rational> m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

Matrix<Rational> load_matrix(const std::filesystem::path& file, bool allow_decimal)
{
    if (file.extension() == ".csv") {
        std::ifstream in(file);
        if (!in) throw InputError("file not found: " + file.string());
        std::stringstream buf;
        buf << in.rdbuf();
        return matrix_from_csv(buf.str(), allow_decimal);
    }
    return matrix_from_json(read_json_file(file), allow_decimal);
}

Json matrix_to_json(const Matrix<Rational>& m)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Subalgebra subalgebra_from_json(std::size_t points, const Json& doc)
{
    const Json& blocks = require(doc, "blocks", "subalgebra");
    std::vector<std::vector<std::size_t>> out;
    try {
        out = blocks.get<std::vector<std::vector<std::size_t>>>();
    } catch (const Json::exception&) {
        throw InputError("subalgebra: \"blocks\" must be an array of arrays of point indices");
    }
    return Subalgebra(points, std::move(out));
}

Json subalgebra_to_json(const Subalgebra& b)
{
    return Json{{"blocks", b.blocks()}};
}

}  // namespace cpcross
