#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sphash/hash.hpp"
#include "sphash/sparse_set.hpp"

namespace sphash {

enum class SketchMode : uint8_t {
    threshold = 0, // one hash per (measurement, element), compare against tau
    windows = 1,   // one hash per element, membership in m random windows
};

// Parameters fully determining a sketching function. b is fixed at 64.
struct SketchParams {
    uint64_t m = 0;
    double gamma = 0.0;
    uint8_t b = 64;
    HashSeed seed{0};
    SketchMode mode = SketchMode::threshold;

    // tau = trunc(gamma * (2^64 - 1)) evaluated in IEEE binary64, truncated
    // toward zero; the width-tau region of the 64-bit range fires a
    // measurement with probability gamma up to 2^-64 quantization.
    uint64_t tau() const {
        return static_cast<uint64_t>(gamma * 18446744073709551615.0);
    }

    void validate() const; // throws param_error on domain violations
};

// Digest binding a sketch to the parameters that produced it. Windows-mode
// sketches also bind the window draw.
uint64_t params_fingerprint(const SketchParams& params, uint64_t window_seed = 0);

// m-bit measurement vector. Bit i lives in word i>>6 at position i&63;
// bits at positions >= m are kept zero.
struct BitSketch {
    std::vector<uint64_t> words;
    uint64_t m = 0;
    uint64_t fingerprint = 0;

    static BitSketch zeros(uint64_t m, uint64_t fingerprint);

    bool bit(uint64_t i) const { return (words[i >> 6] >> (i & 63)) & 1; }
    void set_bit(uint64_t i) { words[i >> 6] |= uint64_t(1) << (i & 63); }
    uint64_t one_count() const;
    uint64_t zero_count() const { return m - one_count(); }

    bool operator==(const BitSketch&) const = default;
};

// Entropy-maximizing sparsification probability: (1-gamma)^k = 1/2.
double gamma_for_entropy(uint64_t k);

// Smallest measurement count m guaranteeing, for a corpus of N signals with
// supports in [k_min, k_max], that every pairwise sim_sh estimate stays
// within epsilon of the true Jaccard except with probability N^(2-beta).
uint64_t concentration_min_measurements(uint64_t n_signals, uint64_t k_min,
                                   uint64_t k_max, double gamma, double epsilon,
                                   double beta);

// Work instrumentation for the benchmark and the complexity tests.
struct SketchWorkCounters {
    uint64_t hashes = 0;
    uint64_t comparisons = 0;
};

// Threshold sketcher: bit i is set iff some element's i-th family hash falls
// below tau; scan of a measurement stops at the first hit. Empty sets sketch
// to all zeros.
BitSketch sketch_threshold(const SketchParams& params, const SparseSet& s,
                           SketchWorkCounters* work = nullptr);

// m random windows of width tau over the hash range, kept as sorted bottoms.
// Measurement index == rank in sorted order. No window wraps the top.
struct WindowSet {
    std::vector<uint64_t> bottoms; // ascending
    uint64_t tau = 0;
    uint64_t seed = 0; // window-rng seed that produced the draw
};

WindowSet draw_windows(const SketchParams& params, uint64_t window_rng_seed);

// Balanced search tree over window bottoms; node ranks match measurement
// indices, topValue = bottom + tau stored explicitly.
struct WindowTree {
    struct Node {
        uint64_t bottom = 0;
        uint64_t top = 0;
        uint64_t meas_index = 0;
        int32_t left = -1;
        int32_t right = -1;
    };
    std::vector<Node> nodes;
    int32_t root = -1;

    uint32_t depth() const;
};

WindowTree build_tree(const WindowSet& w);

// Fast sketcher: exactly one hash per element; membership resolved by tree
// descent plus a local scan over overlapping neighbor windows. Bit-identical
// to the naive all-pairs membership scan.
BitSketch sketch_windows(const SketchParams& params, const WindowSet& w,
                         const WindowTree& tree, const SparseSet& s,
                         SketchWorkCounters* work = nullptr);
BitSketch sketch_windows(const SketchParams& params, const WindowSet& w,
                         const SparseSet& s, SketchWorkCounters* work = nullptr);

// Core of the fast sketcher, operating on precomputed element hashes. The
// returned sketch carries fingerprint 0; wrappers stamp it.
BitSketch windows_sketch_from_hashes(const WindowSet& w, const WindowTree& tree,
                                     std::span<const uint64_t> hashes,
                                     SketchWorkCounters* work = nullptr);

} // namespace sphash
