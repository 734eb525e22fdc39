#pragma once

// Portable draws from a seeded mt19937_64. The standard distributions are
// implementation-defined, so results would differ between libraries.

#include <cstdint>
#include <random>

namespace epsbasin {

/// Uniform in [0, 1) from the top 53 bits.
inline double unit_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

/// Uniform in [lo, hi).
inline double uniform_in(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); }

/// Uniform index in [0, n); n > 0.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    const auto i = std::size_t(unit_uniform(rng) * double(n));
    return i < n ? i : n - 1;
}

}  // namespace epsbasin
