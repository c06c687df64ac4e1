#pragma once

#include <vector>

#include "mroot/diffop.hpp"
#include "mroot/noether.hpp"

namespace mroot {

/// Truncated Macaulay-type matrix at a point: rows are Taylor coefficients
/// of the shifted products (x - pt)^beta * f_i for |beta| <= order - 1,
/// columns are indexed by the monomials of total degree <= order. Its null
/// space encodes the dual space up to that order. Test-scale machinery;
/// deliberately the big-matrix route the fast path avoids.
struct MacaulayMatrix {
    Matrix m;
    std::vector<Monomial> cols;
    int order = 0;
};

MacaulayMatrix macaulay_matrix(const PolySystem& f, const Point& pt, int order);

struct MultiplicityResult {
    int mu = 0;
    int rho = 0;
    std::vector<DiffOp> dual_basis;
    /// nullity_by_order[k] = numerical nullity of the order-k matrix,
    /// k = 0, ..., rho (entry 0 is 1 by convention).
    std::vector<int> nullity_by_order;
};

/// Brute-force multiplicity: grows the Macaulay matrix order by order until
/// the numerical nullity (singular values below tau * sigma_1) stabilizes.
/// Throws NoStabilizationError when k_max is reached first.
MultiplicityResult multiplicity(const PolySystem& f, const Point& pt, double tau, int k_max = 20);

/// The stabilized null space reinterpreted as differential operators.
std::vector<DiffOp> dual_basis_bruteforce(const PolySystem& f, const Point& pt, double tau, int k_max = 20);

} // namespace mroot
