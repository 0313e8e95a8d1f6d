#pragma once

#include <cstdint>
#include <random>

namespace rotorlab {

// Unbiased draw from [0, n) using rejection on the raw engine output.
// std::uniform_int_distribution is not pinned down by the standard, and
// generated instances must be reproducible byte for byte across builds.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

// Distinct streams for (seed, stream) pairs, e.g. one per trial.
inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{seed, stream, std::uint64_t{0x9e3779b97f4a7c15ULL}};
    return std::mt19937_64(seq);
}

} // namespace rotorlab
