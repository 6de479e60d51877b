// =============================================================================
// rng.hpp — Counter-based random number generation.
//
// SplitMix64 steps a 64-bit counter by a fixed odd gamma and mixes it, so a
// stream is a pure function of (initial counter, draw index).  Replica streams
// are derived from (seed, replica) and are therefore reproducible no matter
// how replicas are scheduled across threads.
// =============================================================================
#pragma once

#include <cstdint>
#include <limits>

namespace wfq {

class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    // Stream for replica r of a run seeded with `seed`.  Mixing the replica
    // index through the output function before xoring keeps streams with
    // nearby indices decorrelated.
    static SplitMix64 for_replica(std::uint64_t seed, std::uint64_t replica) {
        SplitMix64 g(seed);
        std::uint64_t salt = mix(replica + 0x9E3779B97F4A7C15ULL);
        return SplitMix64(mix(g() ^ salt));
    }

    std::uint64_t operator()() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() {
        return std::numeric_limits<std::uint64_t>::max();
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace wfq
