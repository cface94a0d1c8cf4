#pragma once

/// @file rng.hpp
/// Seeded random streams with platform-stable output. std::uniform_*
/// distributions are implementation-defined, so the uniform helpers here
/// are hand-rolled; every sampled dataset byte depends on them staying
/// fixed.

#include <cstdint>
#include <random>
#include <string_view>

namespace gf {

/// splitmix64 step; also used as the per-sample seed hash.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stable 64-bit hash of an arbitrary byte string, seeded.
inline std::uint64_t hash64(std::uint64_t seed, std::string_view bytes) {
    std::uint64_t h = seed ^ 0x2545f4914f6cdd1dULL;
    for (unsigned char c : bytes) {
        h ^= c;
        (void)splitmix64(h);
        h = splitmix64(h);
    }
    return splitmix64(h);
}

/// Derive an independent child seed from (seed, label, index).
/// Used for per-sample and per-draw streams so that output is invariant
/// to worker count and scheduling order.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index) {
    std::uint64_t h = hash64(base, label);
    h ^= 0x9e3779b97f4a7c15ULL * (index + 1);
    return splitmix64(h);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        // modulo-rejection keeps the draw unbiased
        std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return lo + static_cast<std::int64_t>(v % span);
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace gf
