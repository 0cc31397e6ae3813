#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace md2d {

/// SplitMix64 mixing step (Steele, Lea, Flood 2014). Used to derive
/// independent substream seeds from a master seed.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Substream seed for `index` under `master`. Distinct indices give
/// statistically independent streams; the mapping is pure.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(master ^ splitmix64(index + 0x9e3779b97f4a7c15ULL));
}

/// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
/// Avoids std::uniform_real_distribution, whose output is not specified
/// bit-for-bit across standard library implementations.
inline double uniform_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller from two explicit uniform draws.
inline double standard_normal(std::mt19937_64& rng) {
    // shift into (0,1] so log() stays finite
    double u1 = static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
    double u2 = uniform_double(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace md2d
