#include "sphash/synthetic.hpp"

#include <cmath>

#include "sphash/error.hpp"
#include "sphash/hash.hpp"

namespace sphash {

namespace {

constexpr size_t kClusterSize = 10;

// Head-anchored targets give pairs safely above both thresholds; the
// tail-anchored ones populate the region just below (and one notch above)
// 0.5 for false-positive pressure without dragging recall.
constexpr double kTailTargets[] = {0.30, 0.40, 0.46, 0.49, 0.56};
constexpr double kHeadTargets[] = {0.78, 0.84, 0.90, 0.95};

uint64_t overlap_for(size_t k, double j) {
    return static_cast<uint64_t>(
        std::llround(2.0 * static_cast<double>(k) * j / (1.0 + j)));
}

} // namespace

std::vector<SparseSet> make_eval_corpus(size_t n_items, size_t k, uint64_t seed) {
    if (k < 16) throw param_error("make_eval_corpus: k must be >= 16");
    SplitMix64 rng(seed);

    // Global pool: ~36% of k, putting unrelated pairs near J = 0.22. That
    // bulk sits where the estimators' false-positive tails at the usual
    // decision thresholds differ most.
    size_t g = static_cast<size_t>(std::llround(0.3607 * static_cast<double>(k)));
    std::vector<uint64_t> global_pool(g);
    for (auto& v : global_pool) v = rng.next();

    auto fresh_fill = [&rng](std::vector<uint64_t>& ids, size_t count) {
        for (size_t i = 0; i < count; ++i) ids.push_back(rng.next());
    };

    std::vector<SparseSet> corpus;
    corpus.reserve(n_items);
    size_t fresh_per_item = k - g;

    size_t n_clusters = n_items / kClusterSize;
    for (size_t c = 0; c < n_clusters; ++c) {
        std::vector<uint64_t> base_fresh;
        base_fresh.reserve(fresh_per_item);
        fresh_fill(base_fresh, fresh_per_item);

        auto make_member = [&](std::vector<uint64_t> shared_fresh) {
            std::vector<uint64_t> ids = global_pool;
            ids.insert(ids.end(), shared_fresh.begin(), shared_fresh.end());
            fresh_fill(ids, k - ids.size());
            return SparseSet::from_unsorted(std::move(ids));
        };

        corpus.push_back(make_member(base_fresh)); // the base itself
        for (double t : kHeadTargets) {
            size_t o = overlap_for(k, t) - g;
            corpus.push_back(make_member(
                {base_fresh.begin(), base_fresh.begin() + o}));
        }
        for (double t : kTailTargets) {
            size_t o = overlap_for(k, t) - g;
            corpus.push_back(make_member(
                {base_fresh.end() - static_cast<ptrdiff_t>(o), base_fresh.end()}));
        }
    }
    while (corpus.size() < n_items) {
        std::vector<uint64_t> ids = global_pool;
        fresh_fill(ids, k - ids.size());
        corpus.push_back(SparseSet::from_unsorted(std::move(ids)));
    }
    return corpus;
}

} // namespace sphash
