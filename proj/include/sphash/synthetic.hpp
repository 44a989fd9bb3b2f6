#pragma once

#include <cstdint>
#include <vector>

#include "sphash/sparse_set.hpp"

namespace sphash {

// Deterministic corpus for precision/recall experiments: items of cardinality
// k arranged in clusters of 10 (one base plus nine variants at fixed overlap
// levels with it). A global pool shared by every item keeps cross-cluster
// pairs near J = 0.15; within-cluster pairs span roughly [0.2, 0.95] with
// mass both just below and well above the usual 0.5/0.6 decision thresholds.
// Leftover items (n not a multiple of 10) share only the global pool.
std::vector<SparseSet> make_eval_corpus(size_t n_items, size_t k, uint64_t seed);

} // namespace sphash
