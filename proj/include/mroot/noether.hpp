#pragma once

#include <vector>

#include "mroot/diffop.hpp"
#include "mroot/linalg.hpp"

namespace mroot {

/// Ordered closed basis L_0, ..., L_{mu-1} of the (approximate) Max Noether
/// space in the breadth-one case, after the coordinate rotation that puts
/// the near-null direction of the Jacobian first:
///   L_0 = D(0,...,0), L_1 = D(1,0,...,0),
///   L_k = P_k + a_{k,2} D(0,1,...,0) + ... + a_{k,n} D(0,...,1).
struct NoetherBasis {
    std::vector<DiffOp> ops;
    /// params[k][j-2] holds a_{k,j} for k >= 2, 2 <= j <= n.
    /// Slots 0 and 1 are empty placeholders so indices match orders.
    std::vector<std::vector<cd>> params;
    /// ||L_k(F)(pt)|| for each operator, recorded as the basis was built.
    std::vector<double> residuals;

    int mu() const { return static_cast<int>(ops.size()); }
    cd param(int k, int j_math) const { return params[k][j_math - 2]; }
};

/// Basis {L_0, L_1} that seeds the order-by-order construction.
NoetherBasis initial_basis(const PolySystem& f, const Point& pt);

/// The parameter-free part P_k of the order-k condition, from the
/// recurrences
///   P_k = Psi_1(L_{k-1}) + Psi_2(Q_{k,2})|_{a1=0} + ...
///         + Psi_n(Q_{k,n})|_{a1=...=a_{n-1}=0},
///   Q_{k,j} = a_{2,j} L_{k-2} + ... + a_{k-1,j} L_1.
/// Satisfies phi(P_k, 1) == L_{k-1} exactly.
DiffOp build_p_k(const NoetherBasis& basis, int k);

struct ExtendOutcome {
    bool extended = false;
    NoetherBasis basis;   // input basis when extended == false
    Matrix order_matrix;  // [P_k(F)(pt), dF/dx_2(pt), ..., dF/dx_n(pt)]
    DiffOp p_k;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
};

/// One order of the incremental construction: forms the t x n matrix
/// [P_k(F)(pt), dF/dx_2(pt), ..., dF/dx_n(pt)], reads a_{k,j} off its
/// smallest right singular vector, and accepts the new operator when
/// sigma_min < tau * sigma_max. Otherwise reports a stop (mu reached).
ExtendOutcome extend_basis(const PolySystem& f, const Point& pt, const NoetherBasis& basis, double tau);

struct BasisBuild {
    NoetherBasis basis;
    Matrix final_matrix; // the order-mu matrix whose rank test failed
    DiffOp p_mu;
    double final_sigma_min = 0.0;
    double final_sigma_max = 0.0;
};

/// Runs extend_basis from order 2 until the rank test stops it.
/// Throws BreadthError when no stop occurs by order max_mu.
BasisBuild build_basis(const PolySystem& f, const Point& pt, double tau, int max_mu = 50);

/// Closed basis of the augmented system G(z, lambda) = {H, H' lambda,
/// lambda_1 - 1} at the lifted root, built from the base parameters:
/// returns L~_0, ..., L~_{mu-2} in 2n variables.
std::vector<DiffOp> augmented_noether_basis(const NoetherBasis& base);

} // namespace mroot
