#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ktree {

// SplitMix64 finalizer. Bijective on 64-bit words; mix64(0) == 0.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed of the independent stream used by trial `trial` of an experiment
// seeded with `seed`:  mix64(seed XOR mix64(trial + 1)).
// The +1 keeps trial 0 from collapsing onto mix64(seed).
constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) noexcept {
    return mix64(seed ^ mix64(trial + 1));
}

// Seed for the secondary stream that drives edge deletion in partial k-trees.
constexpr std::uint64_t deletion_seed(std::uint64_t seed) noexcept {
    return mix64(seed ^ 0x6a09e667f3bcc909ULL);
}

/// xoshiro256** seeded through SplitMix64, with jump() for 2^128 stride
/// sub-streams. Models UniformRandomBitGenerator.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform integer in [0, range), range > 0. Lemire's multiply-shift with
    /// rejection of the biased low region, so the result is exactly uniform.
    std::uint64_t bounded(std::uint64_t range) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * range;
        auto low = static_cast<std::uint64_t>(m);
        if (low < range) {
            const std::uint64_t threshold = (0 - range) % range;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * range;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Advance by 2^128 draws.
    void jump() noexcept;

    bool operator==(const Rng&) const = default;

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

} // namespace ktree
