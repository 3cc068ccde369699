#pragma once

#include "nvadjust/distributions.hpp"

#include <cstdint>
#include <random>

namespace nvadjust {

/// SplitMix64 output function. Used to decorrelate user-facing seeds and to
/// derive per-stream child seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Child seed for stream `index` under `master`: the (index+1)-th output of a
/// SplitMix64 sequence started at `master`. Stateless, so streams can be
/// created in any order (or in parallel) with identical results.
inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

/**
 * Reproducible random source with fully specified draw algorithms.
 *
 * Engine: std::mt19937_64 (bit-exact by the C++ standard). Mappings:
 *   uniform: u = ((x >> 11) + 0.5) * 2^-53, strictly inside (0, 1)
 *   normal / laplace: inverse CDF of a single uniform draw
 * No std::*_distribution adapters are used, so identical seeds reproduce
 * identical streams on any conforming implementation.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal(double mean, double sd) {
        return mean + sd * normal_quantile(uniform());
    }

    double laplace(double mean, double scale) {
        return laplace_quantile(uniform(), mean, scale);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace nvadjust
