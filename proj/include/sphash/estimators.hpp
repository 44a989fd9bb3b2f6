#pragma once

#include <cstdint>

#include "sphash/sketch.hpp"

namespace sphash {

enum class SimMethod : uint8_t {
    sim_sh = 0,
    hamming_inverted = 1,
    minhash = 2,
    minhash_1bit = 3,
    bottom_m = 4,
};

// Why an estimate carries no usable value.
enum class UndefinedReason : uint8_t {
    none = 0,
    all_zero = 1,        // both sketches entirely zero (sim_union == 1)
    no_common_zeros = 2, // no position where both bits are zero
};

struct SimilarityEstimate {
    double value = 0.0; // clamped to [0,1] when defined
    double raw = 0.0;   // unclamped diagnostic value
    SimMethod method = SimMethod::sim_sh;
    bool defined = false;
    UndefinedReason reason = UndefinedReason::none;
};

const char* sim_method_name(SimMethod m);
const char* undefined_reason_name(UndefinedReason r);

// Fraction of positions where both bits are zero.
double sim_union(const BitSketch& y, const BitSketch& z);

// (#zeros in y)(#zeros in z) / (m * #common zeros); may exceed 1. Throws
// undefined_similarity_error when there is no common zero position.
double sim_intersection(const BitSketch& y, const BitSketch& z);

// log(sim_intersection) / log(sim_union), the reduced-space Jaccard
// estimator. Undefined cases are reported, never silently replaced by a
// number; raw keeps the unclamped ratio.
SimilarityEstimate sim_sh(const BitSketch& y, const BitSketch& z);

// Number of differing bit positions (word-wise XOR + popcount).
uint64_t hamming(const BitSketch& y, const BitSketch& z);
double normalized_hamming(const BitSketch& y, const BitSketch& z);

// Expected normalized Hamming distance between sketches of supports with
// cardinalities k1, k2 and Jaccard J, plus its variance at measurement
// count m.
struct HammingModel {
    uint64_t k1 = 0;
    uint64_t k2 = 0;
    uint64_t m = 0;
    double gamma = 0.0;
    double j = 0.0;
    double e_sh = 0.0;  // (1-g)^k1 + (1-g)^k2 - 2 (1-g)^((k1+k2)/(1+J))
    double v_hat = 0.0; // (1 - e_sh) e_sh / m
};

HammingModel expected_hamming(uint64_t k1, uint64_t k2, double gamma, double j,
                              uint64_t m);

// Entropy-optimal closed form 1 - 2^((J-1)/(1+J)), valid when
// (1-gamma)^k = 1/2 and k1 ~ k2.
double expected_hamming_entropy(double j);

// Unique J with expected_hamming(...).e_sh equal to the (clamped) observed
// normalized distance; bisection to 1e-10 on the strictly decreasing model.
SimilarityEstimate invert_hamming(double normalized_distance, uint64_t k1,
                                  uint64_t k2, double gamma);

} // namespace sphash
