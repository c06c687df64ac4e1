#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mroot/poly.hpp"

namespace mroot {

/// Parse failure with position information.
struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int column_)
        : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                             std::to_string(column_) + ")"),
          line(line_), column(column_) {}
};

/// A polynomial-system definition file:
///   # comment
///   vars: x, y
///   poly: x^2 - y
///   poly: y^2
///   root: 0, 0          (optional known root)
///   guess: 0.01, -0.01  (optional initial guess)
///   mu: 4               (optional expected multiplicity)
///   tau: 0.01           (optional recommended rank tolerance)
/// Expressions support + - * ^ with nonnegative integer powers, decimal and
/// rational literals, and the imaginary unit i.
struct SystemFile {
    std::vector<std::string> variables;
    PolySystem system;
    std::optional<Point> known_root;
    std::optional<Point> initial_guess;
    std::optional<int> expected_mu;
    std::optional<double> recommended_tau;
};

SystemFile parse_system(const std::string& text);
SystemFile load_system(const std::string& path);

/// Canonical text form; parse_system(print_system(f)) reproduces f with
/// bit-identical coefficients.
std::string print_system(const SystemFile& f);

/// 15-significant-digit complex formatting, "a+bi" style, for reports.
std::string format_complex(cd z);

} // namespace mroot
