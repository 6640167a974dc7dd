#pragma once

// Deterministic random streams. Substreams are derived by hashing a base
// seed with stream labels, so independent consumers (trials, links, init
// draws) never share generator state and results do not depend on call
// order or thread schedule. Uniform and normal variates are produced from
// raw mt19937_64 output directly, keeping byte-level reproducibility
// independent of the standard library's distribution implementations.

#include <cmath>
#include <cstdint>
#include <random>

#include "secbeam/numerics.hpp"

namespace secbeam {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Hash a seed with up to three stream labels into an independent substream seed.
inline uint64_t derive_stream(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t h = splitmix64(seed ^ 0x243f6a8885a308d3ULL);
    h = splitmix64(h ^ splitmix64(a ^ 0x13198a2e03707344ULL));
    h = splitmix64(h ^ splitmix64(b ^ 0xa4093822299f31d0ULL));
    h = splitmix64(h ^ splitmix64(c ^ 0x082efa98ec4e6c89ULL));
    return h;
}

class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform phase in [0, 2*pi).
    double uniform_angle() { return 2.0 * M_PI * uniform(); }

    /// Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]: keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

    /// Circularly symmetric complex normal CN(0, 1): E|z|^2 = 1.
    cplx cnormal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1));  // sqrt(-2 ln u)/sqrt(2)
        const double a = 2.0 * M_PI * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    /// Unit-modulus entry with uniform phase.
    cplx unit_phase() { return std::polar(1.0, uniform_angle()); }

  private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace secbeam
