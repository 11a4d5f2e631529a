#pragma once

#include "cpcross/cp_finite.hpp"
#include "cpcross/diag.hpp"

#include <functional>

namespace cpcross {

struct IdentityWitness {
    Path mu;
    Path nu;
    DiagElement lhs;
    DiagElement rhs;
};

struct TransferIdentityReport {
    bool passed = true;
    std::size_t depth = 0;
    std::size_t pairs_checked = 0;    // evaluated explicitly
    std::size_t pairs_vanishing = 0;  // both sides products of disjoint cylinders
    std::optional<IdentityWitness> witness;
};

using EndomorphismOverride = std::function<DiagElement(const DiagElement&)>;

// Checks L(q_mu alpha(q_nu)) = L(q_mu) q_nu for all paths with |mu|, |nu| <= depth.
// A replacement for alpha may be supplied to exercise the check.
TransferIdentityReport verify_transfer_identity(const GraphPtr& g, const WeightSystem& lambda, std::size_t depth,
                                                const EndomorphismOverride& alpha_override = {});

struct SystemClassification {
    bool is_exel_system = false;
    bool is_regular = false;
    bool is_corner = false;

    bool regular_by_normalization = false;  // sum over s^{-1}(v) equals 1 for v in s(E^1)
    bool normalized_at_every_vertex = false;  // the same sum read over all of E^0
    bool regular_by_identity = false;       // alpha L alpha = alpha on the basis
    bool corner_identity = false;           // alpha(L(q)) = p q p on the basis
    bool hereditary_range = false;

    std::size_t depth = 0;
    std::vector<VertexSum> emitter_sums;
    std::optional<std::string> witness;
    std::optional<Path> witness_path;
    std::optional<Rational> witness_factor;
    std::optional<DiagElement> witness_lhs;
    std::optional<DiagElement> witness_rhs;
};

SystemClassification classify_system(const GraphPtr& g, const WeightSystem& lambda, std::size_t depth);

struct IdealReport {
    std::vector<Path> n_l;           // kernel ideal N_L
    std::vector<Path> n_l_perp;      // its annihilator
    std::vector<Path> j_xl;          // J(X_L)
    std::vector<Path> intersection;  // annihilator of N_L meet J(X_L)
    std::size_t depth = 0;
    bool depth_relative = true;
    bool brute_force_checked = false;
    std::vector<Path> brute_force_kernel;  // boundary points supporting the largest ideal in ker L
};

IdealReport compute_ideals(const GraphPtr& g, const WeightSystem& lambda, std::size_t depth);

// Largest set of boundary points S with L(chi_T) = 0 for all T inside S,
// computed pointwise on the finite boundary of an acyclic graph.
std::vector<Path> kernel_ideal_brute_force(const Graph& g, const WeightSystem& lambda);

struct CovarianceSpanReport {
    bool equal = false;
    std::size_t depth = 0;
    std::size_t products_dimension = 0;    // span{alpha(q_mu) q_nu}
    std::size_t generators_dimension = 0;  // span{q_eta : 1 <= |eta| <= depth}
    std::size_t joint_dimension = 0;
};

CovarianceSpanReport covariance_span_check(const GraphPtr& g, std::size_t depth);

// Transfer operator of a graph restricted to the depth-d truncation, as a
// positive map on functions over the depth-d atoms.
PositiveMapMatrix truncated_transfer_matrix(const GraphPtr& g, const WeightSystem& lambda, std::size_t depth);

struct RegularEndomorphism {
    Endomorphism alpha;
    Subalgebra range;  // B = alpha(A)
    bool is_corner = false;
    bool transfer_faithful_on_generated_ideal = false;  // L faithful on A alpha(A) A
};

struct RegularEnumeration {
    bool image_is_ideal = false;
    std::string reason;
    std::vector<std::size_t> image_support;
    Subalgebra multiplicative_domain;
    std::vector<RegularEndomorphism> endomorphisms;
};

// All alpha making (C^n, alpha, L) a regular Exel system, through the
// subalgebras B of MD(L) on which L is a bijection onto L(A).
RegularEnumeration enumerate_regular_endomorphisms(const PositiveMapMatrix& l);

struct TruncatedDomain {
    std::size_t depth = 0;
    std::vector<Path> atoms;
    Subalgebra subalgebra;  // over the atoms, in order
    std::vector<DiagElement> basis;
    bool depth_relative = true;
    bool corner_closed_form_checked = false;
};

TruncatedDomain multiplicative_domain_truncated(const GraphPtr& g, const WeightSystem& lambda, std::size_t depth);

}  // namespace cpcross
