#include "sphash/sparse_set.hpp"

#include <algorithm>
#include <cmath>

#include "sphash/error.hpp"
#include "sphash/hash.hpp"

namespace sphash {

SparseSet SparseSet::from_unsorted(std::vector<uint64_t> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return SparseSet(std::move(ids));
}

CorpusStats corpus_stats(std::span<const SparseSet> docs) {
    CorpusStats st;
    st.n_docs = docs.size();
    if (docs.empty()) return st;
    st.k_min = docs[0].k();
    st.k_max = docs[0].k();
    double sum = 0.0;
    for (const auto& d : docs) {
        st.k_min = std::min(st.k_min, d.k());
        st.k_max = std::max(st.k_max, d.k());
        sum += static_cast<double>(d.k());
    }
    st.k_mean = sum / static_cast<double>(docs.size());
    return st;
}

double jaccard_exact(const SparseSet& a, const SparseSet& b) {
    if (a.empty() && b.empty())
        throw undefined_similarity_error("jaccard_exact: both sets empty");
    size_t inter = 0;
    size_t i = 0, j = 0;
    while (i < a.elements.size() && j < b.elements.size()) {
        if (a.elements[i] < b.elements[j]) {
            ++i;
        } else if (a.elements[i] > b.elements[j]) {
            ++j;
        } else {
            ++inter;
            ++i;
            ++j;
        }
    }
    size_t uni = a.k() + b.k() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

JaccardPair make_pair_with_jaccard(size_t k, double target_j, uint64_t rng_seed) {
    if (k < 1) throw param_error("make_pair_with_jaccard: k must be >= 1");
    if (target_j < 0.0 || target_j > 1.0)
        throw param_error("make_pair_with_jaccard: J must be in [0,1]");

    // J = o/(2k-o)  =>  o = 2kJ/(1+J), snapped to the nearest integer.
    auto o = static_cast<uint64_t>(
        std::llround(2.0 * static_cast<double>(k) * target_j / (1.0 + target_j)));
    if (o > k) o = k;

    // Draw 2k - o distinct ids from the 64-bit universe.
    SplitMix64 rng(rng_seed);
    std::vector<uint64_t> pool;
    size_t need = 2 * k - static_cast<size_t>(o);
    pool.reserve(need);
    while (pool.size() < need) {
        size_t missing = need - pool.size();
        for (size_t i = 0; i < missing; ++i) pool.push_back(rng.next());
        std::sort(pool.begin(), pool.end());
        pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    }

    JaccardPair out;
    out.overlap = o;
    // First o ids are shared; the remaining 2(k-o) split between the two sets.
    std::vector<uint64_t> ea(pool.begin(), pool.begin() + o);
    std::vector<uint64_t> eb = ea;
    size_t pos = o;
    for (size_t i = 0; i < k - o; ++i) ea.push_back(pool[pos++]);
    for (size_t i = 0; i < k - o; ++i) eb.push_back(pool[pos++]);
    out.a = SparseSet::from_unsorted(std::move(ea));
    out.b = SparseSet::from_unsorted(std::move(eb));
    out.achieved_j =
        static_cast<double>(o) / static_cast<double>(2 * k - static_cast<size_t>(o));
    return out;
}

} // namespace sphash
