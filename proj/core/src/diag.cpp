#include "cpcross/diag.hpp"

#include "cpcross/error.hpp"

#include <algorithm>

namespace cpcross {

DiagElement::DiagElement(GraphPtr graph, Terms terms) : graph_(std::move(graph))
{
    for (auto& [p, c] : terms) add_term(p, c);
}

DiagElement DiagElement::projection(GraphPtr graph, const Path& p)
{
    DiagElement a(std::move(graph));
    a.add_term(p, Rational(1));
    return a;
}

DiagElement DiagElement::unit(GraphPtr graph)
{
    DiagElement a(graph);
    for (auto v : graph->vertices()) a.add_term(Path::vertex(v), Rational(1));
    return a;
}

std::size_t DiagElement::max_length() const
{
    std::size_t m = 0;
    for (const auto& [p, c] : terms_) m = std::max(m, p.length());
    return m;
}

Rational DiagElement::coefficient(const Path& p) const
{
    auto it = terms_.find(p);
    return it == terms_.end() ? Rational(0) : it->second;
}

void DiagElement::add_term(const Path& p, const Rational& c)
{
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(p, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

void DiagElement::require_same_graph(const DiagElement& o) const
{
    if (graph_ != o.graph_) throw PreconditionError("graph mismatch between diagonal elements");
}

DiagElement& DiagElement::operator+=(const DiagElement& o)
{
    require_same_graph(o);
    for (const auto& [p, c] : o.terms_) add_term(p, c);
    return *this;
}

DiagElement& DiagElement::operator-=(const DiagElement& o)
{
    require_same_graph(o);
    for (const auto& [p, c] : o.terms_) add_term(p, -c);
    return *this;
}

DiagElement& DiagElement::operator*=(const Rational& c)
{
    if (sgn(c) == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [p, v] : terms_) v *= c;
    return *this;
}

std::string DiagElement::str() const
{
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [p, c] : terms_) {
        if (!first) s += " + ";
        first = false;
        if (c != 1) s += "(" + to_string(c) + ")";
        s += "q[" + p.str(*graph_) + "]";
    }
    return s;
}

// ---------------------------------------------------------------------------

namespace {

void refine_into(const Graph& g, const Path& p, const Rational& c, std::size_t depth, DiagElement& out)
{
    if (p.length() >= depth || g.is_source(p.source())) {
        out.add_term(p, c);
        return;
    }
    for (auto e : g.received(p.source())) refine_into(g, p.append(g, e), c, depth, out);
}

}  // namespace

DiagElement normalize(const DiagElement& a, std::optional<std::size_t> depth)
{
    std::size_t longest = a.max_length();
    std::size_t d = depth.value_or(longest);
    if (d < longest)
        throw PreconditionError("normalization depth " + std::to_string(d) + " is below the support length " +
                                std::to_string(longest));
    DiagElement out(a.graph_ptr());
    for (const auto& [p, c] : a.terms()) refine_into(a.graph(), p, c, d, out);
    return out;
}

DiagElement multiply(const DiagElement& a, const DiagElement& b)
{
    if (a.graph_ptr() != b.graph_ptr()) throw PreconditionError("graph mismatch between diagonal elements");
    DiagElement prod(a.graph_ptr());
    for (const auto& [p, c] : a.terms())
        for (const auto& [q, d] : b.terms()) {
            if (p.is_prefix_of(q))
                prod.add_term(q, c * d);
            else if (q.is_prefix_of(p))
                prod.add_term(p, c * d);
        }
    return normalize(prod, std::max(a.max_length(), b.max_length()));
}

DiagElement alpha(const DiagElement& a)
{
    const Graph& g = a.graph();
    DiagElement out(a.graph_ptr());
    for (const auto& [p, c] : a.terms())
        for (auto e : g.emitted(p.range())) out.add_term(p.prepend(g, e), c);
    return out;
}

void check_alpha_defined(const LazyGraph& g, std::size_t budget)
{
    auto classes = classify_vertices(g, budget);
    if (!classes.infinite_emitters.empty())
        throw PreconditionError("alpha undefined: suspected infinite emitter \"" + classes.infinite_emitters.front() +
                                "\" within a budget of " + std::to_string(budget) + " edges");
}

DiagElement transfer(const DiagElement& a, const WeightSystem& lambda)
{
    const Graph& g = a.graph();
    if (lambda.size() != g.edge_count()) throw PreconditionError("weight system does not match graph");
    DiagElement out(a.graph_ptr());
    for (const auto& [p, c] : a.terms()) {
        if (p.is_vertex()) {
            for (auto e : g.received(p.range())) out.add_term(Path::vertex(g.source(e)), c * lambda[e]);
        } else {
            out.add_term(shift(g, p), c * lambda[p.first_edge()]);
        }
    }
    return normalize(out);
}

bool equals(const DiagElement& a, const DiagElement& b)
{
    if (a.graph_ptr() != b.graph_ptr()) throw PreconditionError("graph mismatch between diagonal elements");
    if (a.terms() == b.terms()) return true;
    std::size_t d = std::max(a.max_length(), b.max_length());
    return normalize(a, d).terms() == normalize(b, d).terms();
}

Rational evaluate(const DiagElement& a, const Path& x)
{
    Rational v = 0;
    for (const auto& [p, c] : a.terms())
        if (p.is_prefix_of(x)) v += c;
    return v;
}

std::vector<Rational> atom_coordinates(const DiagElement& a, const std::vector<Path>& atoms, std::size_t depth)
{
    std::vector<Rational> out(atoms.size(), Rational(0));
    const DiagElement n = normalize(a, depth);
    for (const auto& [p, c] : n.terms()) {
        auto it = std::lower_bound(atoms.begin(), atoms.end(), p);
        if (it == atoms.end() || *it != p)
            throw InvariantViolation("normalized support path " + p.str(a.graph()) + " is not a depth-" +
                                     std::to_string(depth) + " atom");
        out[static_cast<std::size_t>(it - atoms.begin())] = c;
    }
    return out;
}

}  // namespace cpcross
