#pragma once

#include <vector>

#include "mroot/poly.hpp"

namespace mroot {

/// Deflated system in twice the variables: {F(x), F'(x) nu, h* nu - 1}.
/// The last polynomial is affine; h = e_1 for the canonical G form.
struct AugmentedSystem {
    PolySystem system; // 2t + 1 polynomials in 2s variables
    Vec h;
};

/// G(z, lambda) = {H(z), H'(z) lambda, lambda_1 - 1}, built symbolically.
AugmentedSystem augment_g(const PolySystem& h);

/// J(x, nu) = {F(x), F'(x) nu, h* nu - 1} for a general h with ||h|| > 0.
AugmentedSystem augment_j(const PolySystem& f, const Vec& h);

/// (x, nu) stacked into one point.
Point lift_point(const Point& x, const Vec& nu);

/// Repeated deflation: at each stage takes the null vector r1 of the
/// current Jacobian (with respect to tau), augments with h = r1, and lifts
/// the point by nu = r1 / (h* r1) = r1. Stops when the Jacobian is
/// numerically full rank; for a breadth-one root of multiplicity mu the
/// chain has length mu - 1.
std::vector<AugmentedSystem> deflation_chain(const PolySystem& f, const Point& x, double tau);

} // namespace mroot
