#pragma once

#include <stdexcept>
#include <string>

namespace mroot {

/// The point is not corank-one at the working tolerance: zero or more than
/// one singular value fell below the relative gap threshold.
struct BreadthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A linear system that should have full column rank turned out
/// rank-deficient numerically.
struct RankError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A singular vector that must have a nonzero leading entry (the operator
/// parameterization [1, a_2, ..., a_n]) came back with a tiny one.
struct DegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The Macaulay nullity never stabilized within the order cap.
struct NoStabilizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace mroot
