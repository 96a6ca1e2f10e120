#pragma once

#include <cstdint>
#include <random>

namespace mdlad {

/// Name recorded in fit reports alongside the seed.
inline constexpr const char* kRngAlgorithm = "mt19937_64";

/// Deterministic RNG wrapper. Raw engine output is converted to doubles and
/// bounded integers here rather than through <random> distributions, whose
/// output is not pinned by the standard; every draw is therefore reproducible
/// across platforms and toolchains.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool next_bernoulli(double p) { return next_double() < p; }

    /// Uniform in [0, bound) via rejection sampling (exact, no modulo bias).
    std::size_t next_index(std::size_t bound) {
        if (bound <= 1) {
            return 0;
        }
        const std::uint64_t b = bound;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
        std::uint64_t draw;
        do {
            draw = engine_();
        } while (draw >= limit);
        return static_cast<std::size_t>(draw % b);
    }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Seed for restart `restart` of the k-component fit, derived so that every
/// (k, restart) pair runs an independent stream from one user-facing seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k,
                                 std::uint64_t restart) {
    return mix64(mix64(base ^ mix64(k)) ^ mix64(restart));
}

}  // namespace mdlad
