#pragma once

// Reference computations written without the library's algorithms. Paths are
// plain edge-name lists, functions are maps from points to rationals, and
// linear algebra is a small Gaussian elimination of its own.

#include "cpcross/graph.hpp"
#include "cpcross/matrix.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace oracle {

using cpcross::Rational;

struct RawPath {
    std::string range;               // r(mu)
    std::vector<std::string> edges;  // mu_1 ... mu_n
    auto operator<=>(const RawPath&) const = default;
};

struct RawEdge {
    std::string id, src, rng;
    Rational lambda;
};

struct RawGraph {
    std::vector<std::string> vertices;
    std::vector<RawEdge> edges;

    static RawGraph from(const cpcross::Graph& g, const cpcross::WeightSystem* w = nullptr);
    const RawEdge& edge(const std::string& id) const;
    std::string source_of(const RawPath& p) const;
    bool is_source(const std::string& v) const;
};

// Every path of length <= n, by depth-first extension at the source end.
std::vector<RawPath> all_paths(const RawGraph& g, std::size_t n);
// Points of the depth-d truncation: paths of length d, and shorter paths that
// start at a source vertex.
std::vector<RawPath> atoms(const RawGraph& g, std::size_t d);
bool is_prefix(const RawPath& mu, const RawPath& x);

using PointFunction = std::map<RawPath, Rational>;

// Indicator of the cylinder of mu evaluated on the given points.
PointFunction cylinder(const std::vector<RawPath>& points, const RawPath& mu);
// alpha f (x) = f(sigma x), zero on vertex points; f must be given on sigma(points).
PointFunction shift_pullback(const RawGraph& g, const std::vector<RawPath>& points,
                             const std::function<Rational(const RawPath&)>& f);
// L f (x) = sum_{s(e) = r(x)} lambda_e f(e x).
PointFunction perron_frobenius(const RawGraph& g, const std::vector<RawPath>& points,
                               const std::function<Rational(const RawPath&)>& f);

cpcross::Rational cylinder_value(const RawPath& mu, const RawPath& x);

// Rank over Q by plain elimination.
std::size_t rank(std::vector<std::vector<Rational>> rows);

// Largest set S of points whose indicator (and all subsets) is killed by M,
// found by trying every subset.
std::vector<std::size_t> largest_killed_support(const cpcross::Matrix<Rational>& m);

// All set partitions of the points into blocks, with an optional zero block,
// as block lists (zero block omitted).
std::vector<std::vector<std::vector<std::size_t>>> partial_partitions(std::size_t n);

// Largest partition subalgebra on which phi(a b) = phi(a) phi(b) for all b,
// found by trying every partial partition.
std::vector<std::vector<std::size_t>> brute_force_multiplicative_domain(const cpcross::Matrix<Rational>& m);

}  // namespace oracle
