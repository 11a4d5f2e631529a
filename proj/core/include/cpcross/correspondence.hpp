#pragma once

#include "cpcross/cp_finite.hpp"

namespace cpcross {

// A-valued inner product <e_a (x) e_b, e_c (x) e_d> = e_b phi(e_a e_c) e_d.
Function tensor_inner_product(const PositiveMapMatrix& m, std::size_t a, std::size_t b, std::size_t c, std::size_t d);

// GNS correspondence of a positive map on C^n. The pair (x, y) stands for
// e_x (x) e_y; its scalar Gram entry is M[y, x].
struct Correspondence {
    std::size_t points = 0;
    std::vector<std::pair<std::size_t, std::size_t>> ambient;    // index x*n + y
    Matrix<Rational> gram;                                        // sum of point evaluations
    std::vector<std::pair<std::size_t, std::size_t>> surviving;  // quotient basis
    std::vector<Matrix<Rational>> left_action;                   // per point, on the quotient
    std::vector<Matrix<Rational>> right_action;
    std::vector<std::size_t> left_kernel;
    LdlResult gram_ldl;

    std::size_t dimension() const { return surviving.size(); }
};

Correspondence gns_correspondence(const PositiveMapMatrix& m);

struct QuiverDimensionReport {
    std::size_t dimension = 0;
    std::size_t relation_size = 0;
    bool dimensions_equal = false;
    // e_x (x) e_y goes to the quiver edge with source y and range x; the left
    // action then acts through the range and the right action through the source.
    bool actions_match = false;
    bool inner_products_match = false;
    // The formula (a f b)(x, y) = a(x) f(x, y) b(y) on edges read as (source, range).
    bool source_left_formula_matches = false;
};

QuiverDimensionReport quiver_dimension_check(const PositiveMapMatrix& m);

// Complement of the GNS-kernel support; J(X) is all of A in finite dimensions.
std::vector<std::size_t> katsura_ideal(const PositiveMapMatrix& m);

struct ModuleIsoReport {
    bool isometric = false;
    bool bimodule = false;
    bool surjective = false;
    std::size_t gns_dimension = 0;     // dim X_L
    std::size_t module_dimension = 0;  // dim M_L
    std::size_t image_dimension = 0;
    std::optional<std::string> witness;
};

// X_L against M_L through e_a (x) e_b -> e_a alpha(e_b).
ModuleIsoReport exel_module_iso_check(const Endomorphism& alpha, const PositiveMapMatrix& l);

struct CompactFrame {
    std::vector<Matrix<Rational>> generators;  // Theta_{xi_i, xi_j / c_j}, row-major in (i, j)
    std::size_t span_dimension = 0;
    std::size_t commutant_dimension = 0;  // operators commuting with the right action
    std::size_t operator_dimension = 0;   // dim^2
};

CompactFrame compact_operator_frame(const Correspondence& x);

}  // namespace cpcross
