#pragma once

// Seedable, platform-independent PRNG for all sampling in the harness.
// xoshiro256** with splitmix64 state expansion; the algorithm name is
// written into every report header so runs can be reproduced elsewhere.

#include <cstdint>

namespace triosc {

inline constexpr const char* kRngName = "xoshiro256** (splitmix64-seeded)";

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Xoshiro256ss {
  public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[1] * 5ULL, 7) * 9ULL;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0,1) from the top 53 bits; exact and portable.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t state_[4];
};

// Independent generator for sample `index` of a batch keyed by `seed`.
// Deriving per-index states keeps batches order-independent, so parallel
// workers reproduce the sequential result bit for bit.
inline Xoshiro256ss sample_rng(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t sm = seed;
    const std::uint64_t base = splitmix64(sm);
    return Xoshiro256ss(base ^ (0xD1B54A32D192ED03ULL * (index + 1)));
}

}  // namespace triosc
