#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace holoball {

// Self-contained generators so that seeded streams are reproducible across
// standard libraries (std distributions are implementation-defined).

struct SplitMix64 {
    std::uint64_t x;
    explicit SplitMix64(std::uint64_t seed) : x(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

struct Xoshiro256ss {
    std::uint64_t s[4];

    explicit Xoshiro256ss(std::uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& w : s) w = sm.next();
    }

    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1] (safe as a log argument).
    double uniform_pos() { return 1.0 - uniform(); }
};

/// Derives an independent stream id from a base seed and a label, so that
/// per-suite streams never collide (FNV-1a over the label, mixed into seed).
inline std::uint64_t stream_seed(std::uint64_t seed, std::string_view label) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return SplitMix64(seed ^ h).next();
}

/// Box-Muller pair from two uniforms in (0,1].
inline void box_muller(double u1, double u2, double& g1, double& g2) {
    const double r = std::sqrt(-2.0 * std::log(u1));
    g1 = r * std::cos(6.283185307179586476925286766559 * u2);
    g2 = r * std::sin(6.283185307179586476925286766559 * u2);
}

/// Van der Corput radical inverse in the given base.
inline double radical_inverse(std::uint64_t i, std::uint32_t base) {
    double inv = 1.0 / base, f = inv, x = 0.0;
    while (i > 0) {
        x += static_cast<double>(i % base) * f;
        i /= base;
        f *= inv;
    }
    return x;
}

inline constexpr std::uint32_t kHaltonPrimes[16] = {2,  3,  5,  7,  11, 13, 17, 19,
                                                    23, 29, 31, 37, 41, 43, 47, 53};

} // namespace holoball
