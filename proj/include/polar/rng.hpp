#pragma once

#include <cstdint>

namespace polar {

// SplitMix64: counter-based 64-bit generator. One state word, a fixed
// increment, and a mixing finalizer; streams split deterministically from a
// base seed and a replicate index. Recorded by name in run manifests.
class SplitMix64 {
public:
    static constexpr const char* kName = "splitmix64";

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    // Deterministic per-replicate stream seed.
    static std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t replicate) {
        return mix(base_seed + (replicate + 1) * 0x9E3779B97F4A7C15ULL);
    }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double prob) { return uniform01() < prob; }

    // Uniform integer in [0, bound); bound >= 1. Fixed-point multiply keeps
    // the draw sequence platform-independent.
    std::uint64_t uniform_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

private:
    std::uint64_t state_;
};

}  // namespace polar
