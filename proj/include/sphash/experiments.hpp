#pragma once

#include <cstdint>
#include <vector>

#include "sphash/estimators.hpp"
#include "sphash/sketch.hpp"

namespace sphash {

// Reproducible sub-seed derivation for repeat/grid experiment structure.
uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b = 0, uint64_t c = 0);

// First m bits of a sketch under a re-stamped fingerprint. For threshold
// sketches this equals sketching at the smaller m directly.
BitSketch prefix_sketch(const BitSketch& s, uint64_t m, uint64_t fingerprint);

// Hamming-distance validation: seeded random pairs at each target J,
// empirical mean/variance of d_H/m against the model.
struct HammingValidationRow {
    double j_target = 0.0;
    double j_achieved = 0.0;
    double emp_mean = 0.0;
    double emp_var = 0.0;
    double e_sh = 0.0;
    double v_hat = 0.0;
};

std::vector<HammingValidationRow> hamming_validation(
    size_t k, uint64_t m, size_t runs, std::span<const double> j_grid,
    uint64_t seed, unsigned threads);

// Concentration of sim_sh around the exact Jaccard over seeded pairs.
struct ConcentrationRow {
    double j_target = 0.0;
    double j_achieved = 0.0;
    double mean_estimate = 0.0;
    double max_abs_error = 0.0;
    size_t undefined_count = 0;
};

std::vector<ConcentrationRow> simsh_concentration(
    size_t k, uint64_t m, size_t pairs, std::span<const double> j_grid,
    uint64_t seed, unsigned threads);

// Precision/recall harness over a corpus with exact ground truth.
struct PrConfig {
    std::vector<uint64_t> m_grid;
    std::vector<double> thresholds;
    int repeats = 10;
    uint64_t seed = 1;
    double gamma = 0.0; // 0 -> entropy-optimal for the mean support size
    unsigned threads = 0;
};

struct PrRow {
    uint64_t m = 0;
    double threshold = 0.0;
    SimMethod method = SimMethod::sim_sh;
    int repeat = 0; // -1 marks the mean over repeats
    double precision = 0.0;
    double recall = 0.0;
    uint64_t tp = 0;
    uint64_t retrieved = 0;
    uint64_t positives = 0;
    bool empty_positive_class = false;
};

std::vector<PrRow> eval_pr(std::span<const SparseSet> corpus, const PrConfig& config);

// One benchmark cell: timed setup (window draw + tree build) and per-item
// sketching, with work counters. sketch_sec is the best of `reps` runs.
struct BenchCell {
    uint64_t k = 0;
    uint64_t m = 0;
    SketchMode mode = SketchMode::threshold;
    double setup_sec = 0.0;
    double sketch_sec = 0.0;
    uint64_t hashes = 0;
    uint64_t comparisons = 0;
    uint64_t sketch_bytes = 0;  // this sketch: 1 bit per measurement
    uint64_t minhash_bytes = 0; // classic minhash at the same m: 64 bits each
};

BenchCell bench_cell(uint64_t k, uint64_t m, SketchMode mode, double gamma,
                     uint64_t seed, int reps);

} // namespace sphash
