#pragma once

#include <cstdint>

#include "mroot/matrix.hpp"

namespace mroot {

/// Deterministic random source for perturbations and test-system
/// generation. Hand-rolled Box-Muller over a 64-bit generator so streams
/// are identical across standard libraries.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    double uniform(); // [0, 1)
    double gauss();
    cd complex_gauss();

    /// Complex vector with unit 2-norm.
    Vec unit_vector(int n);

    /// Haar-ish random unitary via Gram-Schmidt on a Gaussian matrix.
    Matrix unitary(int n);

  private:
    uint64_t next();
    uint64_t state_;
};

} // namespace mroot
