#pragma once

#include "cpcross/graph.hpp"

#include <map>

namespace cpcross {

// Finite rational combination of cylinder projections q_mu = s_mu s_mu^* in
// the diagonal algebra of a graph. Terms are kept as given; normalize()
// produces the canonical refinement.
class DiagElement {
public:
    using Terms = std::map<Path, Rational>;

    explicit DiagElement(GraphPtr graph) : graph_(std::move(graph)) {}
    DiagElement(GraphPtr graph, Terms terms);

    static DiagElement projection(GraphPtr graph, const Path& p);
    static DiagElement unit(GraphPtr graph);  // sum of q_v over all vertices

    const Graph& graph() const { return *graph_; }
    const GraphPtr& graph_ptr() const { return graph_; }
    const Terms& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t max_length() const;

    // Coefficient of q_p as stored (no refinement).
    Rational coefficient(const Path& p) const;
    void add_term(const Path& p, const Rational& c);

    DiagElement& operator+=(const DiagElement& o);
    DiagElement& operator-=(const DiagElement& o);
    DiagElement& operator*=(const Rational& c);
    friend DiagElement operator+(DiagElement a, const DiagElement& b) { return a += b; }
    friend DiagElement operator-(DiagElement a, const DiagElement& b) { return a -= b; }
    friend DiagElement operator*(DiagElement a, const Rational& c) { return a *= c; }
    friend DiagElement operator*(const Rational& c, DiagElement a) { return a *= c; }

    // Structural equality of the stored terms; use equals() for algebra equality.
    friend bool operator==(const DiagElement& a, const DiagElement& b)
    {
        return a.graph_ == b.graph_ && a.terms_ == b.terms_;
    }

    std::string str() const;

private:
    void require_same_graph(const DiagElement& o) const;

    GraphPtr graph_;
    Terms terms_;
};

// Refines q_mu = sum_{r(e)=s(mu)} q_{mu e} until every term has length depth or
// ends at a source. Depth defaults to the longest support path.
DiagElement normalize(const DiagElement& a, std::optional<std::size_t> depth = std::nullopt);

// Prefix rule q_mu q_nu = q_longer when comparable, else 0, extended
// bilinearly and normalized.
DiagElement multiply(const DiagElement& a, const DiagElement& b);

// alpha(q_eta) = sum_{s(e)=r(eta)} q_{e eta}.
DiagElement alpha(const DiagElement& a);

// Throws when the lazy graph shows a suspected infinite emitter within budget.
void check_alpha_defined(const LazyGraph& g, std::size_t budget);

// L(q_eta) = lambda_{eta_1} q_{sigma(eta)} for |eta| >= 1 and
// L(q_v) = sum_{r(e)=v} lambda_e q_{s(e)}.
DiagElement transfer(const DiagElement& a, const WeightSystem& lambda);

bool equals(const DiagElement& a, const DiagElement& b);

// Value of a at a boundary point, read as a function on the path space:
// sum of coefficients of the support paths that are prefixes of x.
Rational evaluate(const DiagElement& a, const Path& x);

// Coordinates of a in the atom basis of the depth-d truncation.
std::vector<Rational> atom_coordinates(const DiagElement& a, const std::vector<Path>& atoms, std::size_t depth);

}  // namespace cpcross
