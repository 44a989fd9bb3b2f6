#pragma once

#include <cstdint>
#include <vector>

#include "sphash/estimators.hpp"
#include "sphash/sketch.hpp"

namespace sphash {

// Variant values double as the mode byte in the sketch container format.
enum class MinHashVariant : uint8_t {
    classic = 2,
    one_bit = 3,
    bottom_m = 4,
};

struct MinHashSketch {
    MinHashVariant variant = MinHashVariant::classic;
    uint64_t m = 0;
    uint64_t fingerprint = 0;
    // classic: m minima; bottom_m: min(m, k) smallest hashes, ascending.
    std::vector<uint64_t> values;
    // one_bit: m bits, same packing as BitSketch.
    std::vector<uint64_t> words;

    bool operator==(const MinHashSketch&) const = default;
};

uint64_t minhash_fingerprint(MinHashVariant variant, uint64_t m, HashSeed seed);

// m independent hash functions, one minimum each. Throws on empty sets.
MinHashSketch minhash_classic(uint64_t m, HashSeed seed, const SparseSet& s,
                              SketchWorkCounters* work = nullptr);

// Lowest bit of each classic minimum; per-bit collision probability (J+1)/2.
MinHashSketch minhash_1bit(uint64_t m, HashSeed seed, const SparseSet& s,
                           SketchWorkCounters* work = nullptr);

// The min(m, k) smallest values of a single hash function, sorted.
MinHashSketch bottom_m(uint64_t m, HashSeed seed, const SparseSet& s,
                       SketchWorkCounters* work = nullptr);

// Fraction of matching minima.
SimilarityEstimate estimate_minhash(const MinHashSketch& a, const MinHashSketch& b);

// 2 * (matching-bit fraction) - 1, clamped to [0,1].
SimilarityEstimate estimate_minhash_1bit(const MinHashSketch& a,
                                         const MinHashSketch& b);

// |B(a) ∩ B(b) ∩ B(a ∪ b)| / |B(a ∪ b)| where B(x) is the bottom sketch of x
// and B(a ∪ b) is obtained by merging the two sketches.
SimilarityEstimate estimate_bottom_m(const MinHashSketch& a, const MinHashSketch& b);

} // namespace sphash
