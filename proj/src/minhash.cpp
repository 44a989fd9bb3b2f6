#include "sphash/minhash.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "sphash/error.hpp"

namespace sphash {

namespace {

void check_nonempty(const SparseSet& s, const char* who) {
    if (s.empty())
        throw param_error(std::string(who) + ": minimum of an empty set is undefined");
}

void check_comparable(const MinHashSketch& a, const MinHashSketch& b) {
    if (a.fingerprint != b.fingerprint || a.variant != b.variant)
        throw incomparable_error("minhash sketches built under different parameters");
}

void check_m(uint64_t m) {
    if (m < 1) throw param_error("minhash: m must be >= 1");
}

} // namespace

uint64_t minhash_fingerprint(MinHashVariant variant, uint64_t m, HashSeed seed) {
    uint64_t fp = mix64(seed.base ^ 0x9FB21C651E98DF25ULL);
    fp = mix64(fp ^ m);
    fp = mix64(fp ^ uint64_t(variant));
    return fp;
}

MinHashSketch minhash_classic(uint64_t m, HashSeed seed, const SparseSet& s,
                              SketchWorkCounters* work) {
    check_m(m);
    check_nonempty(s, "minhash_classic");
    MinHashSketch sk;
    sk.variant = MinHashVariant::classic;
    sk.m = m;
    sk.fingerprint = minhash_fingerprint(sk.variant, m, seed);
    sk.values.assign(m, std::numeric_limits<uint64_t>::max());
    for (uint64_t i = 0; i < m; ++i)
        for (uint64_t e : s.elements)
            sk.values[i] = std::min(sk.values[i], family_hash(seed, i, e));
    if (work) {
        work->hashes += m * s.k();
        work->comparisons += m * s.k();
    }
    return sk;
}

MinHashSketch minhash_1bit(uint64_t m, HashSeed seed, const SparseSet& s,
                           SketchWorkCounters* work) {
    MinHashSketch classic = minhash_classic(m, seed, s, work);
    MinHashSketch sk;
    sk.variant = MinHashVariant::one_bit;
    sk.m = m;
    sk.fingerprint = minhash_fingerprint(sk.variant, m, seed);
    sk.words.assign((m + 63) / 64, 0);
    for (uint64_t i = 0; i < m; ++i)
        if (classic.values[i] & 1) sk.words[i >> 6] |= uint64_t(1) << (i & 63);
    return sk;
}

MinHashSketch bottom_m(uint64_t m, HashSeed seed, const SparseSet& s,
                       SketchWorkCounters* work) {
    check_m(m);
    check_nonempty(s, "bottom_m");
    MinHashSketch sk;
    sk.variant = MinHashVariant::bottom_m;
    sk.m = m;
    sk.fingerprint = minhash_fingerprint(sk.variant, m, seed);
    sk.values.reserve(s.k());
    for (uint64_t e : s.elements) sk.values.push_back(family_hash(seed, 0, e));
    std::sort(sk.values.begin(), sk.values.end());
    sk.values.erase(std::unique(sk.values.begin(), sk.values.end()), sk.values.end());
    if (sk.values.size() > m) sk.values.resize(m);
    if (work) {
        work->hashes += s.k();
        work->comparisons += s.k();
    }
    return sk;
}

SimilarityEstimate estimate_minhash(const MinHashSketch& a, const MinHashSketch& b) {
    check_comparable(a, b);
    if (a.variant != MinHashVariant::classic)
        throw param_error("estimate_minhash: expected classic sketches");
    uint64_t matches = 0;
    for (uint64_t i = 0; i < a.m; ++i)
        if (a.values[i] == b.values[i]) ++matches;
    SimilarityEstimate est;
    est.method = SimMethod::minhash;
    est.raw = static_cast<double>(matches) / static_cast<double>(a.m);
    est.value = est.raw;
    est.defined = true;
    return est;
}

SimilarityEstimate estimate_minhash_1bit(const MinHashSketch& a,
                                         const MinHashSketch& b) {
    check_comparable(a, b);
    if (a.variant != MinHashVariant::one_bit)
        throw param_error("estimate_minhash_1bit: expected one_bit sketches");
    uint64_t diff = 0;
    for (size_t w = 0; w < a.words.size(); ++w)
        diff += std::popcount(a.words[w] ^ b.words[w]);
    double match_frac =
        static_cast<double>(a.m - diff) / static_cast<double>(a.m);
    SimilarityEstimate est;
    est.method = SimMethod::minhash_1bit;
    est.raw = 2.0 * match_frac - 1.0; // collision law p = (J+1)/2
    est.value = std::clamp(est.raw, 0.0, 1.0);
    est.defined = true;
    return est;
}

SimilarityEstimate estimate_bottom_m(const MinHashSketch& a, const MinHashSketch& b) {
    check_comparable(a, b);
    if (a.variant != MinHashVariant::bottom_m)
        throw param_error("estimate_bottom_m: expected bottom_m sketches");
    // Bottom sketch of the union: merge, dedup, keep the m smallest.
    std::vector<uint64_t> merged;
    merged.reserve(a.values.size() + b.values.size());
    std::merge(a.values.begin(), a.values.end(), b.values.begin(), b.values.end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    if (merged.size() > a.m) merged.resize(a.m);
    uint64_t in_all = 0;
    for (uint64_t v : merged)
        if (std::binary_search(a.values.begin(), a.values.end(), v) &&
            std::binary_search(b.values.begin(), b.values.end(), v))
            ++in_all;
    SimilarityEstimate est;
    est.method = SimMethod::bottom_m;
    if (merged.empty()) {
        est.reason = UndefinedReason::all_zero;
        return est;
    }
    est.raw = static_cast<double>(in_all) / static_cast<double>(merged.size());
    est.value = std::clamp(est.raw, 0.0, 1.0);
    est.defined = true;
    return est;
}

} // namespace sphash
