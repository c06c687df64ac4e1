#include "mroot/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mroot {

uint64_t Rng::next() {
    // splitmix64
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::gauss() {
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cd Rng::complex_gauss() {
    return cd(gauss(), gauss());
}

Vec Rng::unit_vector(int n) {
    if (n < 1) throw std::invalid_argument("unit_vector: n must be positive");
    for (;;) {
        Vec v(n);
        for (cd& c : v) c = complex_gauss();
        const double nn = norm2(v);
        if (nn > 1e-6) {
            for (cd& c : v) c /= nn;
            return v;
        }
    }
}

Matrix Rng::unitary(int n) {
    Matrix q(n, n);
    for (int j = 0; j < n; ++j) {
        Vec w(n);
        for (cd& c : w) c = complex_gauss();
        for (int pass = 0; pass < 2; ++pass) {
            for (int k = 0; k < j; ++k) {
                cd proj = 0.0;
                for (int i = 0; i < n; ++i) proj += std::conj(q(i, k)) * w[i];
                for (int i = 0; i < n; ++i) w[i] -= proj * q(i, k);
            }
        }
        const double nw = norm2(w);
        if (nw < 1e-8) {
            // Try again with a fresh draw.
            --j;
            continue;
        }
        for (int i = 0; i < n; ++i) q(i, j) = w[i] / nw;
    }
    return q;
}

} // namespace mroot
