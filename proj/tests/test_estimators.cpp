#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cmath>

#include "sphash/error.hpp"
#include "sphash/estimators.hpp"
#include "sphash/experiments.hpp"
#include "sphash/parallel.hpp"
#include "sphash/sparse_set.hpp"
#include "test_util.hpp"

using namespace sphash;

namespace {

// 4-bit sketch from a pattern string, most significant position first is
// pattern[0] at bit 0.
BitSketch from_pattern(const char* pattern, uint64_t fingerprint = 7) {
    uint64_t m = 0;
    while (pattern[m]) ++m;
    BitSketch s = BitSketch::zeros(m, fingerprint);
    for (uint64_t i = 0; i < m; ++i)
        if (pattern[i] == '1') s.set_bit(i);
    return s;
}

} // namespace

TEST_CASE("sim_union hand counts") {
    CHECK(sim_union(from_pattern("0000"), from_pattern("0000")) == 1.0);
    CHECK(sim_union(from_pattern("0011"), from_pattern("0101")) == 0.25);
    CHECK(sim_union(from_pattern("1111"), from_pattern("0101")) == 0.0);
}

TEST_CASE("sim_intersection hand counts") {
    // y == z with zero count Z: (Z*Z)/(m*Z) = Z/m
    CHECK(sim_intersection(from_pattern("0011"), from_pattern("0011")) == 0.5);
    CHECK(sim_intersection(from_pattern("0011"), from_pattern("0101")) == 1.0);
    CHECK_THROWS_AS(sim_intersection(from_pattern("1111"), from_pattern("1111")),
                    undefined_similarity_error);
}

TEST_CASE("sim_sh hand values and undefined cases") {
    SimilarityEstimate identical = sim_sh(from_pattern("0011"), from_pattern("0011"));
    CHECK(identical.defined);
    CHECK(identical.value == doctest::Approx(1.0));

    SimilarityEstimate zero = sim_sh(from_pattern("0011"), from_pattern("0101"));
    CHECK(zero.defined);
    CHECK(zero.value == doctest::Approx(0.0)); // log(1)/log(1/4)

    SimilarityEstimate all_zero = sim_sh(from_pattern("0000"), from_pattern("0000"));
    CHECK_FALSE(all_zero.defined);
    CHECK(all_zero.reason == UndefinedReason::all_zero);

    SimilarityEstimate no_common = sim_sh(from_pattern("1111"), from_pattern("0000"));
    CHECK_FALSE(no_common.defined);
    CHECK(no_common.reason == UndefinedReason::no_common_zeros);
}

TEST_CASE("raw sim_sh below zero is clamped, raw retained") {
    // zeros(y)=3, zeros(z)=1, common=1: sim_inter = 3/4 ... pick a case with
    // sim_inter > 1: y=0001 z=0010 -> zy=3, zz=3, common=2, si=9/8, su=1/2.
    SimilarityEstimate e = sim_sh(from_pattern("0001"), from_pattern("0010"));
    CHECK(e.defined);
    CHECK(e.raw < 0.0);
    CHECK(e.value == 0.0);
}

TEST_CASE("hamming hand counts and symmetry") {
    BitSketch y = from_pattern("0011");
    BitSketch z = from_pattern("0101");
    CHECK(hamming(y, y) == 0);
    CHECK(hamming(y, z) == 2);
    CHECK(hamming(z, y) == 2);
    CHECK(hamming(from_pattern("0011"), from_pattern("1100")) == 4);
    CHECK(normalized_hamming(y, z) == 0.5);
}

TEST_CASE("estimators reject fingerprint mismatches") {
    BitSketch y = from_pattern("0011", 1);
    BitSketch z = from_pattern("0101", 2);
    CHECK_THROWS_AS(sim_union(y, z), incomparable_error);
    CHECK_THROWS_AS(sim_intersection(y, z), incomparable_error);
    CHECK_THROWS_AS(sim_sh(y, z), incomparable_error);
    CHECK_THROWS_AS(hamming(y, z), incomparable_error);
}

TEST_CASE("estimator symmetry and ordering on random sketches") {
    SplitMix64 rng(5150);
    for (int trial = 0; trial < 200; ++trial) {
        uint64_t m = 2 + rng.next_below(200);
        BitSketch y = BitSketch::zeros(m, 3), z = BitSketch::zeros(m, 3);
        for (uint64_t i = 0; i < m; ++i) {
            if (rng.next_double() < 0.4) y.set_bit(i);
            if (rng.next_double() < 0.4) z.set_bit(i);
        }
        CHECK(sim_union(y, z) == sim_union(z, y));
        CHECK(hamming(y, z) == hamming(z, y));
        double zy = double(y.zero_count()) / double(m);
        double zz = double(z.zero_count()) / double(m);
        uint64_t common = static_cast<uint64_t>(
            std::llround(sim_union(y, z) * double(m)));
        if (common > 0) {
            double si = sim_intersection(y, z);
            CHECK(si == sim_intersection(z, y));
            CHECK(si >= std::max(zy, zz) - 1e-12);
            CHECK(std::max(zy, zz) >= sim_union(y, z) - 1e-12);
            SimilarityEstimate a = sim_sh(y, z), b = sim_sh(z, y);
            CHECK(a.defined == b.defined);
            if (a.defined) CHECK(a.value == b.value);
        }
    }
}

TEST_CASE("expected_hamming closed-form cases") {
    double g230 = gamma_for_entropy(230);
    HammingModel j1 = expected_hamming(230, 230, g230, 1.0, 50);
    CHECK(j1.e_sh == doctest::Approx(0.0).epsilon(1e-9));
    HammingModel j0 = expected_hamming(230, 230, g230, 0.0, 50);
    CHECK(j0.e_sh == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(j0.v_hat == doctest::Approx(0.25 / 50.0).epsilon(1e-9));
    HammingModel j13 = expected_hamming(230, 230, g230, 1.0 / 3.0, 50);
    CHECK(j13.e_sh == doctest::Approx(1.0 - 2.0 * std::pow(0.5, 1.5)).epsilon(1e-9));
    CHECK(j13.e_sh == doctest::Approx(0.29289).epsilon(1e-4));

    CHECK(expected_hamming_entropy(0.0) == doctest::Approx(0.5));
    CHECK(expected_hamming_entropy(1.0) == doctest::Approx(0.0));
    CHECK(expected_hamming_entropy(1.0 / 3.0) ==
          doctest::Approx(0.2928932188134524).epsilon(1e-12));

    CHECK_THROWS_AS(expected_hamming(0, 230, g230, 0.5, 50), param_error);
    CHECK_THROWS_AS(expected_hamming(230, 230, 1.5, 0.5, 50), param_error);
    CHECK_THROWS_AS(expected_hamming(230, 230, g230, 1.5, 50), param_error);
}

TEST_CASE("e_sh is strictly decreasing in J") {
    double g = gamma_for_entropy(230);
    double prev = expected_hamming(230, 200, g, 0.0, 10).e_sh;
    for (int i = 1; i <= 100; ++i) {
        double j = double(i) / 100.0;
        double cur = expected_hamming(230, 200, g, j, 10).e_sh;
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("invert_hamming fixed points and round trip") {
    double g = gamma_for_entropy(230);
    double e_at_1 = expected_hamming(230, 230, g, 1.0, 50).e_sh;
    CHECK(invert_hamming(e_at_1, 230, 230, g).value ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(invert_hamming(0.5, 230, 230, g).value ==
          doctest::Approx(0.0).epsilon(1e-9));

    for (int i = 0; i <= 10; ++i) {
        double j = double(i) / 10.0;
        double d = expected_hamming(230, 230, g, j, 50).e_sh;
        CHECK(invert_hamming(d, 230, 230, g).value ==
              doctest::Approx(j).epsilon(1e-9));
    }
    // round trip at J=0.37 to 1e-9 with heterogeneous k
    double d = expected_hamming(230, 190, 0.004, 0.37, 50).e_sh;
    CHECK(invert_hamming(d, 230, 190, 0.004).value ==
          doctest::Approx(0.37).epsilon(1e-9));
    // out-of-range observations clamp to the endpoints
    CHECK(invert_hamming(0.99, 230, 230, g).value == doctest::Approx(0.0));
    CHECK(invert_hamming(0.0, 230, 230, g).value == doctest::Approx(1.0));
}

TEST_CASE("bound-sized sketches concentrate sim_sh over a corpus") {
    // m from the concentration bound at N=100, beta=3, eps=0.15; every pairwise
    // estimate should then sit within eps of the exact Jaccard, allowing a
    // 1% failure fraction plus slack (3 of 4950 pairs).
    const size_t n = 100;
    const size_t k = 230;
    double gamma = gamma_for_entropy(k);
    uint64_t m = concentration_min_measurements(n, k, k, gamma, 0.15, 3.0);
    CHECK(m == 90178); // frozen reference evaluation

    // 50 controlled pairs spanning the J grid; cross pairs sit near J = 0.
    std::vector<SparseSet> corpus(n);
    for (size_t t = 0; t < n / 2; ++t) {
        auto pair = make_pair_with_jaccard(k, double(t % 11) / 10.0,
                                           derive_seed(31, t));
        corpus[2 * t] = std::move(pair.a);
        corpus[2 * t + 1] = std::move(pair.b);
    }
    SketchParams params{m, gamma, 64, HashSeed{99}, SketchMode::threshold};
    std::vector<BitSketch> sketches(n);
    parallel_for(n, 0, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i)
            sketches[i] = sketch_threshold(params, corpus[i]);
    });
    std::atomic<size_t> failures{0};
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
    parallel_for(pairs.size(), 0, [&](size_t begin, size_t end) {
        size_t local = 0;
        for (size_t p = begin; p < end; ++p) {
            auto [i, j] = pairs[p];
            SimilarityEstimate est = sim_sh(sketches[i], sketches[j]);
            double exact = jaccard_exact(corpus[i], corpus[j]);
            if (!est.defined || std::abs(est.value - exact) > 0.15) ++local;
        }
        failures += local;
    });
    CHECK(failures.load() <= 3);
}
