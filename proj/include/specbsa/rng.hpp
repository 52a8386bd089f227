#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace specbsa {

// Thin wrappers around mt19937_64 that avoid std::*_distribution, whose
// output is implementation-defined. Keeps seeded datasets identical across
// standard libraries.

inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

// Box-Muller; draws two uniforms per call and discards the paired variate so
// call sequences stay aligned with the draw count.
inline double gaussian(std::mt19937_64& gen) {
    double u1 = uniform01(gen);
    const double u2 = uniform01(gen);
    while (u1 <= 0.0) u1 = uniform01(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

} // namespace specbsa
