#pragma once
// qcreg-cbrng-v1: a counter-based pseudo-random generator (splitmix64
// finalizer over a keyed counter) with explicit stream splitting, so every
// generated corpus is bit-reproducible across platforms.

#include <cmath>
#include <cstdint>

namespace qcreg {

inline std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

struct CounterRng {
    std::uint64_t key = 0;
    std::uint64_t counter = 0;

    static CounterRng from_seed(std::uint64_t seed) { return {mix64(seed), 0}; }

    // independent substream: key re-derived from (key, stream), counter reset
    CounterRng split(std::uint64_t stream) const
    {
        return {mix64(key ^ mix64(stream + 0x517cc1b727220a95ull)), 0};
    }

    std::uint64_t next_u64() { return mix64(key ^ mix64(counter++)); }

    // uniform in [0, 1) with 53 random bits
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // uniform integer in [0, n), n >= 1 (modulo bias negligible for n << 2^64)
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    // standard normal via Box-Muller (uses two draws per call)
    double next_gaussian()
    {
        double u1 = next_unit();
        double u2 = next_unit();
        if (u1 <= 0.0)
            u1 = 0x1.0p-53;
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }
};

}  // namespace qcreg
