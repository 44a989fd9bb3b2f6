#include "sphash/sketch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "sphash/error.hpp"

namespace sphash {

void SketchParams::validate() const {
    if (m < 1) throw param_error("sketch params: m must be >= 1");
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw param_error("sketch params: gamma must be in (0,1), got " +
                          std::to_string(gamma));
    if (b != 64) throw param_error("sketch params: b is fixed at 64");
}

uint64_t params_fingerprint(const SketchParams& params, uint64_t window_seed) {
    uint64_t fp = mix64(params.seed.base ^ 0xC2B2AE3D27D4EB4FULL);
    fp = mix64(fp ^ params.m);
    uint64_t gamma_bits;
    static_assert(sizeof(gamma_bits) == sizeof(params.gamma));
    std::memcpy(&gamma_bits, &params.gamma, sizeof(gamma_bits));
    fp = mix64(fp ^ gamma_bits);
    fp = mix64(fp ^ ((uint64_t(params.b) << 8) | uint64_t(params.mode)));
    if (params.mode == SketchMode::windows) fp = mix64(fp ^ window_seed);
    return fp;
}

BitSketch BitSketch::zeros(uint64_t m, uint64_t fingerprint) {
    BitSketch s;
    s.m = m;
    s.fingerprint = fingerprint;
    s.words.assign((m + 63) / 64, 0);
    return s;
}

uint64_t BitSketch::one_count() const {
    uint64_t n = 0;
    for (uint64_t w : words) n += std::popcount(w);
    return n;
}

double gamma_for_entropy(uint64_t k) {
    if (k < 1) throw param_error("gamma_for_entropy: k must be >= 1");
    return 1.0 - std::exp2(-1.0 / static_cast<double>(k));
}

uint64_t concentration_min_measurements(uint64_t n_signals, uint64_t k_min,
                                   uint64_t k_max, double gamma, double epsilon,
                                   double beta) {
    if (n_signals < 2) throw param_error("concentration bound: N must be >= 2");
    if (!(beta > 2.0)) throw param_error("concentration bound: beta must be > 2");
    if (!(epsilon > 0.0)) throw param_error("concentration bound: epsilon must be > 0");
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw param_error("concentration bound: gamma must be in (0,1)");
    if (k_min < 1 || k_min > k_max)
        throw param_error("concentration bound: need 1 <= k_min <= k_max");
    double kmin = static_cast<double>(k_min);
    double kmax = static_cast<double>(k_max);
    double bound = 32.0 * (std::log(4.0) + beta * std::log(static_cast<double>(n_signals))) /
                   (gamma * gamma * kmin * kmin * std::exp(-gamma * kmax) *
                    epsilon * epsilon);
    if (!std::isfinite(bound) || bound >= 9.2e18)
        throw param_error("concentration bound: bound does not fit a 64-bit count");
    return static_cast<uint64_t>(std::floor(bound)) + 1;
}

BitSketch sketch_threshold(const SketchParams& params, const SparseSet& s,
                           SketchWorkCounters* work) {
    params.validate();
    if (params.mode != SketchMode::threshold)
        throw param_error("sketch_threshold: params.mode must be threshold");
    const uint64_t tau = params.tau();
    BitSketch out = BitSketch::zeros(params.m, params_fingerprint(params));
    const uint64_t* elems = s.elements.data();
    const size_t k = s.elements.size();
    uint64_t hashes = 0;
    for (uint64_t i = 0; i < params.m; ++i) {
        for (size_t j = 0; j < k; ++j) {
            ++hashes;
            if (family_hash(params.seed, i, elems[j]) < tau) {
                out.set_bit(i);
                break;
            }
        }
    }
    if (work) {
        work->hashes += hashes;
        work->comparisons += hashes;
    }
    return out;
}

WindowSet draw_windows(const SketchParams& params, uint64_t window_rng_seed) {
    params.validate();
    if (params.mode != SketchMode::windows)
        throw param_error("draw_windows: params.mode must be windows");
    WindowSet w;
    w.tau = params.tau();
    w.seed = window_rng_seed;
    w.bottoms.resize(params.m);
    SplitMix64 rng(window_rng_seed);
    if (w.tau == 0) {
        for (auto& b : w.bottoms) b = rng.next();
    } else {
        // bottoms uniform on [0, 2^64-1-tau]: no window wraps the top.
        const uint64_t range = ~uint64_t(0) - w.tau + 1;
        for (auto& b : w.bottoms) b = rng.next_below(range);
    }
    std::sort(w.bottoms.begin(), w.bottoms.end());
    return w;
}

namespace {

void check_windows(const WindowSet& w) {
    if (w.bottoms.empty()) throw param_error("window set: m must be >= 1");
    for (size_t i = 0; i < w.bottoms.size(); ++i) {
        if (i > 0 && w.bottoms[i] < w.bottoms[i - 1])
            throw param_error("window set: bottoms not sorted");
        if (w.bottoms[i] > ~uint64_t(0) - w.tau)
            throw param_error("window set: window wraps the hash range");
    }
}

int32_t build_subtree(const WindowSet& w, WindowTree& tree, int64_t lo, int64_t hi) {
    if (lo >= hi) return -1;
    int64_t mid = lo + (hi - lo - 1) / 2; // lower median as root
    WindowTree::Node& n = tree.nodes[mid];
    n.bottom = w.bottoms[mid];
    n.top = w.bottoms[mid] + w.tau;
    n.meas_index = static_cast<uint64_t>(mid);
    n.left = build_subtree(w, tree, lo, mid);
    n.right = build_subtree(w, tree, mid + 1, hi);
    return static_cast<int32_t>(mid);
}

} // namespace

WindowTree build_tree(const WindowSet& w) {
    check_windows(w);
    WindowTree tree;
    tree.nodes.resize(w.bottoms.size());
    tree.root = build_subtree(w, tree, 0, static_cast<int64_t>(w.bottoms.size()));
    return tree;
}

uint32_t WindowTree::depth() const {
    std::vector<std::pair<int32_t, uint32_t>> stack;
    if (root >= 0) stack.push_back({root, 1});
    uint32_t d = 0;
    while (!stack.empty()) {
        auto [idx, lvl] = stack.back();
        stack.pop_back();
        d = std::max(d, lvl);
        if (nodes[idx].left >= 0) stack.push_back({nodes[idx].left, lvl + 1});
        if (nodes[idx].right >= 0) stack.push_back({nodes[idx].right, lvl + 1});
    }
    return d;
}

BitSketch windows_sketch_from_hashes(const WindowSet& w, const WindowTree& tree,
                                     std::span<const uint64_t> hashes,
                                     SketchWorkCounters* work) {
    const uint64_t m = w.bottoms.size();
    const uint64_t tau = w.tau;
    const uint64_t* bot = w.bottoms.data();
    BitSketch out = BitSketch::zeros(m, 0);
    uint64_t comparisons = 0;
    for (uint64_t h : hashes) {
        int32_t ptr = tree.root;
        while (ptr >= 0) {
            const WindowTree::Node& node = tree.nodes[ptr];
            ++comparisons;
            if (h < node.bottom) {
                ptr = node.left;
                continue;
            }
            ++comparisons;
            if (h < node.top) {
                const uint64_t r = node.meas_index;
                out.set_bit(r);
                // Windows containing h are contiguous in bottom order: for
                // p > r membership reduces to h >= bot[p], for p < r to
                // h < bot[p] + tau.
                for (uint64_t p = r + 1; p < m; ++p) {
                    ++comparisons;
                    if (h < bot[p]) break;
                    out.set_bit(p);
                }
                for (int64_t p = static_cast<int64_t>(r) - 1; p >= 0; --p) {
                    ++comparisons;
                    if (h >= bot[p] + tau) break;
                    out.set_bit(static_cast<uint64_t>(p));
                }
                break; // no more measurements can collide
            }
            ptr = node.right;
        }
    }
    if (work) {
        work->hashes += hashes.size();
        work->comparisons += comparisons;
    }
    return out;
}

BitSketch sketch_windows(const SketchParams& params, const WindowSet& w,
                         const WindowTree& tree, const SparseSet& s,
                         SketchWorkCounters* work) {
    params.validate();
    if (params.mode != SketchMode::windows)
        throw param_error("sketch_windows: params.mode must be windows");
    if (w.bottoms.size() != params.m || w.tau != params.tau())
        throw incomparable_error(
            "sketch_windows: window set was drawn under different params");
    std::vector<uint64_t> hashes;
    hashes.reserve(s.k());
    for (uint64_t e : s.elements) hashes.push_back(family_hash(params.seed, 0, e));
    BitSketch out = windows_sketch_from_hashes(w, tree, hashes, work);
    out.fingerprint = params_fingerprint(params, w.seed);
    return out;
}

BitSketch sketch_windows(const SketchParams& params, const WindowSet& w,
                         const SparseSet& s, SketchWorkCounters* work) {
    WindowTree tree = build_tree(w);
    return sketch_windows(params, w, tree, s, work);
}

} // namespace sphash
