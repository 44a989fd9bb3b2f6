#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "sphash/error.hpp"
#include "sphash/experiments.hpp"
#include "sphash/sketch.hpp"
#include "test_util.hpp"

using namespace sphash;

namespace {

SparseSet random_set(size_t k, uint64_t seed) {
    std::vector<uint64_t> ids(k);
    SplitMix64 rng(seed);
    for (auto& v : ids) v = rng.next();
    return SparseSet::from_unsorted(std::move(ids));
}

std::vector<uint64_t> in_order_bottoms(const WindowTree& tree) {
    std::vector<uint64_t> out;
    // iterative in-order
    std::vector<int32_t> stack;
    int32_t cur = tree.root;
    while (cur >= 0 || !stack.empty()) {
        while (cur >= 0) {
            stack.push_back(cur);
            cur = tree.nodes[cur].left;
        }
        cur = stack.back();
        stack.pop_back();
        out.push_back(tree.nodes[cur].bottom);
        cur = tree.nodes[cur].right;
    }
    return out;
}

// Exact union measure of the windows divided by 2^64.
double coverage_fraction(const WindowSet& w) {
    long double covered = 0.0L;
    for (size_t i = 0; i < w.bottoms.size(); ++i) {
        uint64_t reach = w.bottoms[i] + w.tau;
        uint64_t next = i + 1 < w.bottoms.size() ? w.bottoms[i + 1] : reach;
        covered += static_cast<long double>(std::min(reach, next) - w.bottoms[i]);
    }
    return static_cast<double>(covered * 0x1.0p-64L);
}

} // namespace

TEST_CASE("draw_windows is deterministic and respects invariants") {
    SketchParams p{50, 0.01, 64, HashSeed{3}, SketchMode::windows};
    WindowSet a = draw_windows(p, 42);
    WindowSet b = draw_windows(p, 42);
    CHECK(a.bottoms == b.bottoms);
    CHECK(a.tau == p.tau());
    for (size_t i = 1; i < a.bottoms.size(); ++i)
        CHECK(a.bottoms[i] >= a.bottoms[i - 1]);
    for (uint64_t bot : a.bottoms) CHECK(bot <= ~uint64_t(0) - a.tau);

    WindowSet c = draw_windows(p, 43);
    CHECK(a.bottoms != c.bottoms);

    p.m = 1;
    WindowSet single = draw_windows(p, 1);
    CHECK(single.bottoms.size() == 1);
}

TEST_CASE("mean window coverage matches 1-(1-gamma')^m") {
    SketchParams p{50, 3e-3, 64, HashSeed{0}, SketchMode::windows};
    const size_t draws = 300;
    std::vector<double> cov(draws);
    for (size_t r = 0; r < draws; ++r)
        cov[r] = coverage_fraction(draw_windows(p, derive_seed(5, r)));
    double mean = 0.0;
    for (double c : cov) mean += c;
    mean /= draws;
    double var = 0.0;
    for (double c : cov) var += (mean - c) * (mean - c);
    var /= (draws - 1);
    double gp = static_cast<double>(p.tau()) * 0x1.0p-64;
    double expected = 1.0 - std::pow(1.0 - gp, double(p.m));
    CHECK(std::abs(mean - expected) < 5.0 * std::sqrt(var / draws) + 1e-6);
}

TEST_CASE("build_tree: single window") {
    WindowSet w{{100}, 10, 0};
    WindowTree t = build_tree(w);
    CHECK(t.nodes.size() == 1);
    CHECK(t.root == 0);
    CHECK(t.nodes[0].meas_index == 0);
    CHECK(t.nodes[0].top == 110);
    CHECK(t.depth() == 1);
}

TEST_CASE("build_tree: m=7 has median root and depth 3") {
    WindowSet w;
    w.tau = 5;
    for (uint64_t i = 0; i < 7; ++i) w.bottoms.push_back(i * 100);
    WindowTree t = build_tree(w);
    CHECK(t.nodes[t.root].meas_index == 3);
    CHECK(t.depth() == 3);
}

TEST_CASE("build_tree: m=6 takes the lower median, in-order is sorted") {
    WindowSet w;
    w.tau = 5;
    for (uint64_t i = 0; i < 6; ++i) w.bottoms.push_back(i * 100 + 7);
    WindowTree t = build_tree(w);
    CHECK(t.nodes[t.root].meas_index == 2);
    CHECK(in_order_bottoms(t) == w.bottoms);
    for (size_t r = 0; r < t.nodes.size(); ++r) {
        CHECK(t.nodes[r].meas_index == r);
        CHECK(t.nodes[r].top == t.nodes[r].bottom + w.tau);
    }
}

TEST_CASE("build_tree depth bound on random sizes") {
    SplitMix64 rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        uint64_t m = 1 + rng.next_below(300);
        SketchParams p{m, 0.01, 64, HashSeed{1}, SketchMode::windows};
        WindowSet w = draw_windows(p, rng.next());
        WindowTree t = build_tree(w);
        CHECK(t.depth() <=
              static_cast<uint32_t>(std::ceil(std::log2(double(m + 1)))));
        CHECK(in_order_bottoms(t) == w.bottoms);
        CHECK(t.nodes.size() == m);
    }
}

TEST_CASE("seven windows, six hashes, measurement pattern 1101010") {
    // Overlapping pair (w0, w1); hash 9 lies in both.
    WindowSet w{{0, 8, 30, 50, 70, 90, 110}, 10, 0};
    WindowTree t = build_tree(w);
    std::vector<uint64_t> hashes = {5, 9, 3, 55, 95, 14};
    BitSketch y = windows_sketch_from_hashes(w, t, hashes);
    std::string pattern;
    for (uint64_t i = 0; i < y.m; ++i) pattern += y.bit(i) ? '1' : '0';
    CHECK(pattern == "1101010");
    CHECK(y == test_util::naive_window_scan(w, hashes));
}

TEST_CASE("hash inside a run of overlapping windows sets every bit in the run") {
    WindowSet w{{100, 105, 110, 115, 120}, 30, 0};
    WindowTree t = build_tree(w);
    std::vector<uint64_t> hashes = {118};
    BitSketch y = windows_sketch_from_hashes(w, t, hashes);
    CHECK(y.bit(0));
    CHECK(y.bit(1));
    CHECK(y.bit(2));
    CHECK(y.bit(3));
    CHECK_FALSE(y.bit(4)); // 118 < 120
    CHECK(y == test_util::naive_window_scan(w, hashes));
}

TEST_CASE("oracle equivalence on random instances") {
    SplitMix64 rng(20240817);
    for (int trial = 0; trial < 1000; ++trial) {
        uint64_t m = 1 + rng.next_below(64);
        size_t k = rng.next_below(33);
        double gamma = std::exp(std::log(1e-3) +
                                rng.next_double() * std::log(0.2 / 1e-3));
        SketchParams p{m, gamma, 64, HashSeed{rng.next()}, SketchMode::windows};
        WindowSet w;
        if (trial % 3 == 0) {
            // Forced-overlap configuration: bottoms packed within ~3 tau.
            w.tau = p.tau();
            std::vector<uint64_t> bottoms(m);
            uint64_t span = std::max<uint64_t>(3 * w.tau, 16);
            uint64_t origin = rng.next_below(~uint64_t(0) - w.tau - span);
            for (auto& b : bottoms) b = origin + rng.next_below(span);
            std::sort(bottoms.begin(), bottoms.end());
            w.bottoms = std::move(bottoms);
        } else {
            w = draw_windows(p, rng.next());
        }
        WindowTree tree = build_tree(w);
        std::vector<uint64_t> hashes(k);
        for (auto& h : hashes) h = rng.next();
        BitSketch fast = windows_sketch_from_hashes(w, tree, hashes);
        BitSketch naive = test_util::naive_window_scan(w, hashes);
        REQUIRE(fast == naive);
    }
}

TEST_CASE("sketch_windows wrapper: hashes once per element, empty set zero") {
    SketchParams p{64, 0.01, 64, HashSeed{12}, SketchMode::windows};
    WindowSet w = draw_windows(p, 5);
    WindowTree t = build_tree(w);
    CHECK(sketch_windows(p, w, t, SparseSet{}).one_count() == 0);

    SparseSet s = random_set(37, 2);
    SketchWorkCounters work;
    BitSketch y = sketch_windows(p, w, t, s, &work);
    CHECK(work.hashes == 37);
    CHECK(sketch_windows(p, w, s) == y); // overload builds the tree itself

    // mismatched window set is rejected
    SketchParams other = p;
    other.m = 32;
    WindowSet w2 = draw_windows(other, 5);
    CHECK_THROWS_AS(sketch_windows(p, w2, s), incomparable_error);
}

TEST_CASE("comparison work scales with k log m, not k m") {
    const uint64_t m = 4096;
    const size_t k = 64;
    SketchParams p{m, 1e-4, 64, HashSeed{9}, SketchMode::windows};
    WindowSet w = draw_windows(p, 77);
    WindowTree tree = build_tree(w);
    SparseSet s = random_set(k, 81);
    SketchWorkCounters work;
    sketch_windows(p, w, tree, s, &work);
    CHECK(work.hashes == k);
    // around 2 comparisons per node on a path of depth <= ceil(log2(m+1)),
    // plus local-search visits; far below the k*m naive scan
    uint64_t bound = 10 * k * (tree.depth() + 2);
    CHECK(work.comparisons <= bound);
    CHECK(work.comparisons < k * m / 4);
}

TEST_CASE("windows marginal law matches threshold marginal") {
    const size_t repeats = 2000;
    const size_t k = 230;
    const uint64_t m = 50;
    double gamma = gamma_for_entropy(k);
    SparseSet s = random_set(k, 1234);
    double sum = 0.0;
    double gp = 0.0;
    for (size_t r = 0; r < repeats; ++r) {
        SketchParams p{m, gamma, 64, HashSeed{derive_seed(91, r)},
                       SketchMode::windows};
        WindowSet w = draw_windows(p, derive_seed(92, r));
        BitSketch y = sketch_windows(p, w, s);
        sum += static_cast<double>(y.zero_count()) / double(m);
        gp = static_cast<double>(w.tau) * 0x1.0p-64;
    }
    double mean = sum / double(repeats);
    double p0 = std::pow(1.0 - gp, double(k));
    CHECK(std::abs(mean - p0) < test_util::binom_tol(p0, double(repeats)));
}
