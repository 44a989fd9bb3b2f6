#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sphash/estimators.hpp"
#include "sphash/sketch.hpp"

namespace sphash {

// Derived LSH parameters. r1/r2 are normalized-Hamming radii (1 - p) with
// r1 = R and r2 = cR.
struct LshPlan {
    uint64_t m = 0; // bits per band
    uint64_t L = 0; // table count
    double rho = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
};

// m = ceil(log N / log(1/p2)), rho = log(1/p1)/log(1/p2), L = ceil(N^rho).
LshPlan plan(uint64_t n_items, double p1, double p2);

// Per-bit collision probabilities as functions of Jaccard. The SparseHash
// value assumes entropy-optimal gamma and k1 ~ k2.
double collision_prob_sparsehash(double j);
double collision_prob_minhash1bit(double j);

// Smallest L with 1 - (1 - p^m)^L >= target. Throws param_error when p^m
// underflows to zero (infeasible plan).
uint64_t tables_required(double p, uint64_t m, double target);

struct Prop1Report {
    bool holds = false;
    size_t n_points = 0;
    double min_interior_margin = 0.0;  // min of p_sh - p_mh on (0,1)
    double max_boundary_deviation = 0.0; // |p_sh - p_mh| at J in {0,1}
    double max_table_ratio = 0.0;      // max over grid of L_sh / L_mh
};

// Checks (J+1)/2 <= 2^((J-1)/(1+J)) and L_sh/L_mh <= 1 over a J grid.
Prop1Report prop1_check(std::span<const double> j_grid, uint64_t m);

struct LshCandidate {
    uint32_t id = 0;
    uint64_t distance = 0;  // Hamming distance between stored sketches
    double normalized = 0.0;
};

// Banded hash-table index over bit sketches. Table t keys on the band code
// of bits [t*m, (t+1)*m); items keep their full sketches for distance
// reporting.
struct LshIndex {
    LshPlan lsh_plan;
    uint64_t sketch_fingerprint = 0;
    // How item sketches were produced; needed to sketch query sets the same
    // way when the index was built from raw sets.
    SketchMode mode = SketchMode::threshold;
    double gamma = 0.0;
    uint64_t seed_base = 0;
    uint64_t window_seed_base = 0;
    bool from_sets = false;

    std::vector<BitSketch> items;
    std::vector<uint64_t> item_support; // k per item; 0 when unknown
    std::vector<std::unordered_map<uint64_t, std::vector<uint32_t>>> tables;

    size_t size() const { return items.size(); }
};

// Code of band t: the m band bits read as an integer (mix-folded when a band
// exceeds 64 bits).
uint64_t band_code(const BitSketch& sketch, uint64_t band_bits, uint64_t table);

// Build over precomputed sketches; each must carry at least L*m bits and a
// common fingerprint.
LshIndex build_index(const LshPlan& plan, std::span<const BitSketch> sketches);

// Build from raw sets: items are sketched at L*m bits (threshold mode), or
// per table with table-offset seeds and independent window draws (windows
// mode), then banded.
LshIndex build_index_from_sets(const LshPlan& plan, double gamma, HashSeed seed,
                               SketchMode mode, uint64_t window_seed_base,
                               std::span<const SparseSet> sets);

// Scan tables in order collecting distinct bucket members until the 3L
// budget; candidates come back with their sketch distances.
std::vector<LshCandidate> query_index(const LshIndex& index, const BitSketch& q);

// Sketches the query set exactly as the indexed items were, then queries.
std::vector<LshCandidate> query_index_set(const LshIndex& index, const SparseSet& q);

} // namespace sphash
