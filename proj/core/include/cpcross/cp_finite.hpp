#pragma once

#include "cpcross/matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cpcross {

// Functions on the finite set {0, ..., n-1}.
using Function = std::vector<Rational>;

Function indicator(std::size_t n, const std::vector<std::size_t>& support);
Function pointwise(const Function& a, const Function& b);

// Positive map on functions over n points: phi(a)(x) = sum_y M[x,y] a(y), so
// row x is the measure mu_x.
class PositiveMapMatrix {
public:
    explicit PositiveMapMatrix(Matrix<Rational> m);

    std::size_t size() const { return m_.rows(); }
    const Matrix<Rational>& matrix() const { return m_; }
    const Rational& operator()(std::size_t x, std::size_t y) const { return m_(x, y); }
    Function apply(const Function& a) const { return m_.apply(a); }

private:
    Matrix<Rational> m_;
};

// Subalgebra of functions given by a partition of part of the point set:
// functions constant on each block and zero off the union of the blocks.
class Subalgebra {
public:
    Subalgebra() = default;
    Subalgebra(std::size_t points, std::vector<std::vector<std::size_t>> blocks);

    static Subalgebra whole(std::size_t points);
    static Subalgebra constants(std::size_t points);
    // chi_S A for a support set S.
    static Subalgebra ideal(std::size_t points, const std::vector<std::size_t>& support);

    std::size_t points() const { return points_; }
    const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
    std::size_t dimension() const { return blocks_.size(); }
    std::vector<std::size_t> support() const;
    std::vector<std::size_t> zero_set() const;
    std::vector<Function> basis() const;  // block indicators
    bool contains(const Function& a) const;
    bool contains(const Subalgebra& other) const;
    // Hereditary in a commutative finite-dimensional algebra: equal to chi_S A.
    bool is_hereditary() const;

    friend bool operator==(const Subalgebra&, const Subalgebra&) = default;

private:
    std::size_t points_ = 0;
    std::vector<std::vector<std::size_t>> blocks_;
};

// The partition subalgebra spanned by a family of functions closed under
// products, or nullopt when the span is not a subalgebra.
std::optional<Subalgebra> subalgebra_from_span(std::size_t points, const std::vector<Function>& span);

Rational op_norm(const PositiveMapMatrix& m);

struct GnsKernel {
    std::vector<std::size_t> zero_set;  // N_phi = functions supported here
    bool brute_force_agrees = false;
};
GnsKernel gns_kernel(const PositiveMapMatrix& m);

struct MultiplicativeDomain {
    Subalgebra subalgebra;
    std::vector<Function> solution_basis;
    bool contractive = false;               // ||M|| <= 1
    bool single_variable_cross_check = false;  // set when the contractive characterization was compared
};
MultiplicativeDomain multiplicative_domain(const PositiveMapMatrix& m);

struct FaithfulnessReport {
    bool faithful_on_generated_ideal = false;
    bool faithful_on_hereditary = false;
    bool almost_faithful = false;
    bool faithful = false;
    std::optional<std::size_t> witness;  // point whose indicator is killed
};
// C is given by its support set.
FaithfulnessReport faithfulness_report(const PositiveMapMatrix& m, const std::vector<std::size_t>& support);

struct SupportRelation {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::vector<std::size_t>> fibers;  // Phi(x)
    std::vector<std::size_t> domain;               // rows with nonzero support
};
SupportRelation support_relation(const PositiveMapMatrix& m);

struct QuiverEdge {
    std::size_t source;
    std::size_t range;
    Rational weight;
};

struct Quiver {
    std::size_t vertices = 0;
    std::vector<QuiverEdge> edges;  // source x, range y, weight M[x,y]
    std::vector<std::size_t> domain;
    bool domain_proper = false;
    std::string openness = "vacuously true (discrete)";
};
Quiver quiver(const PositiveMapMatrix& m);
PositiveMapMatrix rebuild_map(const Quiver& q);

struct ConditionalExpectationReport {
    bool is_conditional_expectation = false;
    std::optional<std::string> first_failure;
    std::string detail;
};
ConditionalExpectationReport is_conditional_expectation(const PositiveMapMatrix& m, const Subalgebra& b);

// Algebra endomorphism of C^n: alpha(a)(x) = a(tau(x)) where tau is defined,
// 0 elsewhere.
class Endomorphism {
public:
    explicit Endomorphism(std::vector<std::optional<std::size_t>> point_map);
    // Throws "not an endomorphism" unless m is 0/1 with at most one 1 per row.
    static Endomorphism from_matrix(const Matrix<Rational>& m);
    static Endomorphism identity(std::size_t n);

    std::size_t size() const { return tau_.size(); }
    const std::vector<std::optional<std::size_t>>& point_map() const { return tau_; }
    Function apply(const Function& a) const;
    Matrix<Rational> matrix() const;
    Subalgebra range() const;

private:
    std::vector<std::optional<std::size_t>> tau_;
};

struct TransferPairReport {
    bool is_exel = false;
    bool is_regular = false;
    bool is_corner = false;
    bool hereditary_range = false;
    std::optional<std::string> witness;
    // Regular transfer operators for this alpha; filled when the range is hereditary.
    std::optional<std::size_t> regular_transfer_count;
    std::optional<std::size_t> regular_transfer_dimension;  // solution-space dimension when infinite
    std::string regular_transfer_summary;
};
TransferPairReport check_transfer_pair(const Matrix<Rational>& alpha_matrix, const PositiveMapMatrix& l);
TransferPairReport check_transfer_pair(const Endomorphism& alpha, const PositiveMapMatrix& l);

}  // namespace cpcross
