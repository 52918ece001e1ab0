#pragma once

/// @file rng.hpp
/// Seeded splitmix64 generator. Self-contained so that streams are identical
/// across platforms and standard-library versions; reruns with the same seed
/// must be byte-reproducible.

#include <cstdint>

namespace covforms {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform in [-amplitude, amplitude).
    double symmetric(double amplitude) { return uniform(-amplitude, amplitude); }

private:
    std::uint64_t state_;
};

}  // namespace covforms
