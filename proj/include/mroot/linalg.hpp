#pragma once

#include "mroot/matrix.hpp"
#include "mroot/poly.hpp"

namespace mroot {

/// A = U diag(singvals) V* with U, V unitary and singvals nonincreasing.
struct SvdFactorization {
    Matrix u;                     // t x t
    std::vector<double> singvals; // min(t, s) values, descending
    Matrix v;                     // s x s
};

/// One-sided Jacobi SVD. Deterministic: singular vectors carry a fixed
/// phase (largest-magnitude entry of each V column real positive).
SvdFactorization svd(const Matrix& a);

struct RegularizedStep {
    Vec y;          // the update
    double sigma_n; // smallest singular value of F'(x), used as regularizer
    double residual; // ||A y - b||
};

/// Tikhonov-regularized Newton update: solves (A*A + sigma_n I) y = A* b
/// with A = F'(x), b = -F(x), through the SVD closed form.
RegularizedStep regularized_newton_step(const PolySystem& f, const Point& x);

/// Right singular vector of the unique singular value below tau * sigma_1.
/// Throws BreadthError when zero or two-or-more qualify.
Vec null_vector(const Matrix& a, double tau);

/// Unitary matrix whose first column is exactly r1 (Householder based;
/// r1 = e1 yields the identity).
Matrix complete_unitary(const Vec& r1);

/// Minimum-norm least squares via SVD. Throws RankError when the numerical
/// column rank (relative threshold rank_rtol) is deficient.
Vec least_squares_solve(const Matrix& m, const Vec& rhs, double rank_rtol = 1e-10);

/// Right singular vector for the smallest singular value, rescaled to a
/// leading entry of exactly 1. Throws DegenerateError when that entry's
/// magnitude is at most 1e-8.
Vec smallest_right_singular_vector(const Matrix& m);

} // namespace mroot
