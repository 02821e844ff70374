#pragma once

#include <cstdint>
#include <random>

namespace mdi {

// Uniform doubles derived from raw mt19937_64 output. Distribution classes
// in <random> are implementation-defined; this keeps seeded datasets
// byte-identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_pm(std::mt19937_64& rng, double amplitude) {
    return amplitude * (2.0 * uniform01(rng) - 1.0);
}

} // namespace mdi
