#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mroot/noether.hpp"

namespace mroot {

struct RefinerConfig {
    /// Relative rank-gap tolerance. Must sit between the noise floor of the
    /// rank tests (a system constant times the error in the approximation)
    /// and the Theta(1) conditioning of the full-rank order matrices, so
    /// coarse starting points need a larger value: 1e-2 is a good choice
    /// for inputs with only 2-3 correct digits, the default suits inputs
    /// closer to the root.
    double tau = 1e-4;
    int max_sweeps = 10;
    /// Stop once ||F(x)|| drops to this level (0 disables the check).
    double target_residual = 0.0;
    /// Stop once the accuracy estimate reaches this many digits (0 disables).
    double target_digits = 0.0;
    int max_mu = 50;
    /// On a BreadthError (no small singular value: the point is regular),
    /// fall back to an ordinary Newton step instead of failing the sweep.
    bool fallback_newton = true;
};

enum class SweepStatus {
    ok,
    fallback_newton,
    breadth_error,
    rank_error,
    degenerate_error,
};

struct SweepRecord {
    double sigma_n = 0.0;   // regularization parameter from step 1
    double y_norm = 0.0;    // size of the regularized Newton update
    int mu = 0;             // detected multiplicity (0 when not reached)
    cd delta = 0.0;         // step length along the null direction
    double residual = 0.0;  // ||F|| at the returned point
    SweepStatus status = SweepStatus::ok;
    std::string note;
};

/// One pass of the breadth-one refinement: regularized Newton step, null
/// vector + rotation, Noether basis, step length delta = v_1 / mu, update
/// x + y + delta r_1. Rank-structure failures abort after step 1 and return
/// the regularized Newton point with a diagnostic in the record.
std::pair<Point, SweepRecord> sweep(const PolySystem& f, const Point& x, const RefinerConfig& cfg);

enum class RefineStatus {
    converged,
    saturated,   // digits stopped improving before reaching full accuracy
    max_sweeps,
    breadth_failed,
};

struct TraceEntry {
    SweepRecord rec;
    Point point;
    double digits = 0.0;
};

struct RefinementTrace {
    double initial_digits = 0.0;
    double initial_residual = 0.0;
    std::vector<TraceEntry> entries;
    RefineStatus status = RefineStatus::max_sweeps;
    Point final_point;

    /// Initial digits followed by the per-sweep digits (the Table format).
    std::vector<double> digit_sequence() const;
};

/// Repeats sweeps until the residual target, digit saturation, or the sweep
/// cap. Digits of accuracy are -log10 of the max-norm error against
/// known_root when given, otherwise estimated from correction sizes.
RefinementTrace refine(const PolySystem& f, const Point& x0, const RefinerConfig& cfg,
                       const std::optional<Point>& known_root = std::nullopt);

/// -log10(max-norm error), capped at 17 digits.
double digits_from_error(double err);

} // namespace mroot
