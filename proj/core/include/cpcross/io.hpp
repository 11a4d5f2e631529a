#pragma once

#include "cpcross/cp_finite.hpp"
#include "cpcross/diag.hpp"
#include "cpcross/graph.hpp"
#include "cpcross/matrix.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace cpcross {

using Json = nlohmann::ordered_json;

struct GraphDocument {
    GraphPtr graph;
    std::optional<WeightSystem> weights;  // present when every edge carries "lambda"
};

// {"vertices": [...], "edges": [{"id", "src", "rng", "lambda"?}]}
GraphDocument load_graph(const std::filesystem::path& file, bool allow_decimal = false);
GraphDocument graph_from_json(const Json& doc, bool allow_decimal = false);
Json graph_to_json(const Graph& g, const WeightSystem* weights = nullptr);

// {"terms": [{"path": ["e","f"], "coeff": "1/2"}, {"path": [], "vertex": "v", "coeff": "1"}]}
DiagElement diag_from_json(const GraphPtr& g, const Json& doc);
Json diag_to_json(const DiagElement& a);
Json path_to_json(const Graph& g, const Path& p);

// JSON array of arrays of "p/q" strings, or CSV rows of rationals.
Matrix<Rational> load_matrix(const std::filesystem::path& file, bool allow_decimal = false);
Matrix<Rational> matrix_from_json(const Json& doc, bool allow_decimal = false);
Matrix<Rational> matrix_from_csv(const std::string& text, bool allow_decimal = false);
Json matrix_to_json(const Matrix<Rational>& m);

// {"blocks": [[0,1],[2]]}
Subalgebra subalgebra_from_json(std::size_t points, const Json& doc);
Json subalgebra_to_json(const Subalgebra& b);

Json read_json_file(const std::filesystem::path& file);

}  // namespace cpcross
