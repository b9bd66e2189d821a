#pragma once

#include <cmath>
#include <cstdint>
#include <random>

// Deterministic per-(seed, trial, node) noise streams. Trials seed
// independent generators, so Monte Carlo results do not depend on
// scheduling order. The uniform-to-double conversion and the gaussian
// transform are spelled out rather than taken from <random>'s
// distributions, whose output is implementation-defined.

namespace edmloc {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = base;
    std::uint64_t h = splitmix64(s);
    s ^= a * 0x9e3779b97f4a7c15ull;
    h ^= splitmix64(s);
    s ^= b + 0x632be59bd9b4e019ull;
    h ^= splitmix64(s);
    return h;
}

class NoiseStream {
  public:
    explicit NoiseStream(std::uint64_t seed) : engine_(seed) {}

    // Uniform in (0, 1]; 53-bit mantissa taken from the top engine bits.
    double uniform() {
        const std::uint64_t u = engine_();
        return (static_cast<double>(u >> 11) + 1.0) * 0x1p-53;
    }

    // Standard normal via Box-Muller (cosine branch only).
    double gaussian() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace edmloc
