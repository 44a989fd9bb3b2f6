#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sphash {

// A sparse support: sorted, deduplicated 64-bit element ids.
struct SparseSet {
    std::vector<uint64_t> elements;

    SparseSet() = default;
    explicit SparseSet(std::vector<uint64_t> sorted_unique)
        : elements(std::move(sorted_unique)) {}

    // Sorts and deduplicates.
    static SparseSet from_unsorted(std::vector<uint64_t> ids);

    size_t k() const { return elements.size(); }
    bool empty() const { return elements.empty(); }

    bool operator==(const SparseSet&) const = default;
};

struct CorpusStats {
    size_t n_docs = 0;
    size_t k_min = 0;
    size_t k_max = 0;
    double k_mean = 0.0;
};

CorpusStats corpus_stats(std::span<const SparseSet> docs);

// Exact Jaccard coefficient by sorted merge. Throws
// undefined_similarity_error when both sets are empty.
double jaccard_exact(const SparseSet& a, const SparseSet& b);

struct JaccardPair {
    SparseSet a;
    SparseSet b;
    uint64_t overlap = 0;  // shared element count o
    double achieved_j = 0; // o / (2k - o), exactly jaccard_exact(a, b)
};

// Two random sets of cardinality k sharing exactly o = round(2kJ/(1+J))
// elements. The requested J is snapped to the nearest achievable value and
// the achieved coefficient returned alongside.
JaccardPair make_pair_with_jaccard(size_t k, double target_j, uint64_t rng_seed);

} // namespace sphash
