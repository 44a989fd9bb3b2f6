#pragma once

#include <cstdint>

namespace sphash {

// Seed identifying a hash family. Equal base values give identical families.
struct HashSeed {
    uint64_t base = 0;
};

inline constexpr uint64_t kGoldenStride = 0x9E3779B97F4A7C15ULL;

// Avalanche finalizer (splitmix64 style). Bit-exact on every platform;
// mix64(0) == 0 by construction.
constexpr uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

// Hash of element `s` under the i-th function of the family identified by
// `seed`. Pure; distinct i give independent-looking streams.
constexpr uint64_t family_hash(HashSeed seed, uint64_t i, uint64_t s) {
    uint64_t c = seed.base + (i + 1) * kGoldenStride;
    return mix64(mix64(s ^ c));
}

// Deterministic sequence generator built on mix64.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(uint64_t seed) : state_(seed) {}

    constexpr uint64_t next() {
        state_ += kGoldenStride;
        return mix64(state_);
    }

    // Uniform draw from [0, bound) without modulo bias (fixed-point scaling).
    constexpr uint64_t next_below(uint64_t bound) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    constexpr double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    uint64_t state_;
};

} // namespace sphash
