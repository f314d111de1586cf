#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>
#include <random>

namespace depthnav {

// Mixes seed words into a well-scrambled 64-bit value (SplitMix64 finalizer).
// Used to derive independent per-episode / per-session streams from one run seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 0x632be59bd9b4e019ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

// Deterministic random stream. All draws are implemented on top of the raw
// mt19937_64 output so sequences are reproducible across platforms and
// standard-library versions (std::uniform_real_distribution is not).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n) via rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(phi);
        has_cached_ = true;
        return r * std::cos(phi);
    }

private:
    std::mt19937_64 gen_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace depthnav
