#pragma once

#include <cstdint>
#include <random>

namespace uidiff {

/// Seedable 64-bit generator used everywhere randomness is needed. The helpers
/// below avoid std distributions so streams are identical across standard libraries.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Independent sub-seed for stream `index` of a parent seed.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(parent) ^ (index * 0xD1B54A32D192ED03ull + 1));
}

/// Uniform integer in [lo, hi].
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(rng());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return lo + static_cast<std::int64_t>(v % range);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
    return static_cast<int>(uniform_int(rng, std::int64_t{lo}, std::int64_t{hi}));
}

/// Uniform real in [lo, hi).
inline double uniform_real(Rng& rng, double lo, double hi) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

inline bool chance(Rng& rng, double p) { return uniform_real(rng, 0.0, 1.0) < p; }

}  // namespace uidiff
