#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rfnn {

/// splitmix64 step (Steele, Lea & Flood; public reference constants).
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic seed derivation for child streams: a keyed splitmix64 hash.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ull + (key << 1));
    std::uint64_t h = splitmix64_next(s);
    s ^= key;
    return h ^ splitmix64_next(s);
}

/// xoshiro256++ (Blackman & Vigna), seeded through splitmix64.
///
/// The integer stream is a pure function of the seed and is identical on every
/// platform. Independent streams are obtained with child(key); derivation does
/// not depend on how many values were drawn from the parent. Normal deviates
/// use Box-Muller (two uniforms per pair, second value cached).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) w = splitmix64_next(s);
    }

    /// Independent stream keyed off this generator's seed (not its position).
    Rng child(std::uint64_t key) const { return Rng(derive_seed(seed_, key)); }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal deviate.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        // u1 in (0, 1] so the log is finite.
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        cached_ = radius * std::sin(angle);
        has_cached_ = true;
        return radius * std::cos(angle);
    }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t seed_;
    std::uint64_t state_[4];
    double cached_ = 0.0;
    bool has_cached_ = false;
};

} // namespace rfnn
