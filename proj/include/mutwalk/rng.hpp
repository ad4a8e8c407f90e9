#pragma once

#include <cstdint>

namespace mutwalk {

// SplitMix64 engine (Vigna's fixed-increment variant of SplittableRandom).
// One 64-bit word of state, passes BigCrush; used both as the per-trial
// generator and as the seed-mixing function that makes trials splittable.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t operator()() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    // Unbiased uniform integer in [0, bound) by rejection on the top of
    // the range; bound must be nonzero.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = (*this)();
        } while (x >= limit);
        return x % bound;
    }

  private:
    std::uint64_t state_;
};

// Deterministic per-trial seed derivation: the trial stream is seeded with
// the SplitMix64 mix of (seed + (trial_index + 1) * golden gamma).  This is
// a pure function of (seed, trial_index), so results do not depend on how
// trials are scheduled across threads.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial_index) {
    SplitMix64 mixer(seed + (trial_index + 1) * 0x9e3779b97f4a7c15ull);
    return mixer();
}

}  // namespace mutwalk
