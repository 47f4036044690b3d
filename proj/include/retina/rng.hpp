#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace retina {

/// Deterministic pseudo-random generator built on the splitmix64 step.
///
/// Every stochastic operation in the library draws from this generator so
/// that results are bit-reproducible for a given seed, independent of the
/// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n) {
        // multiply-shift; bias is negligible for the ranges used here
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Standard normal deviate (Box-Muller, second value cached).
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        // avoid log(0)
        while (u1 <= 0.0) u1 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    double gaussian(double mean, double sigma) { return mean + sigma * gaussian(); }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

/// Derives an independent sub-seed from a master seed and up to three stream
/// tags. Used to fan a single master seed out to per-stage, per-threshold,
/// and per-image generators: each tag is folded in with one splitmix64 step,
/// so sub-streams are decorrelated and the derivation is order-sensitive.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag0,
                                 std::uint64_t tag1 = 0, std::uint64_t tag2 = 0) {
    auto mix = [](std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    std::uint64_t s = mix(master + 0x9E3779B97F4A7C15ULL);
    s = mix(s ^ (tag0 + 0xD1B54A32D192ED03ULL));
    s = mix(s ^ (tag1 + 0x8CB92BA72F3D8DD7ULL));
    s = mix(s ^ (tag2 + 0xEB44ACCAB455D165ULL));
    return s;
}

} // namespace retina
