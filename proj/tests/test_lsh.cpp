#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "sphash/error.hpp"
#include "sphash/experiments.hpp"
#include "sphash/lsh.hpp"
#include "sphash/sparse_set.hpp"
#include "test_util.hpp"

using namespace sphash;

TEST_CASE("plan golden values for N=1e6, p1=0.9, p2=0.5") {
    LshPlan pl = plan(1000000, 0.9, 0.5);
    CHECK(pl.m == 20);
    CHECK(pl.rho == doctest::Approx(0.15200309344505006).epsilon(1e-12));
    CHECK(pl.L == 9);
    CHECK(pl.r1 == doctest::Approx(0.1));
    CHECK(pl.r2 == doctest::Approx(0.5));
}

TEST_CASE("plan limiting and scaling behavior") {
    // p1 close to p2 pushes rho toward 1 and L toward N
    LshPlan tight = plan(1000, 0.500001, 0.5);
    CHECK(tight.rho > 0.999);
    CHECK(tight.L >= 999);

    LshPlan a = plan(100000, 0.9, 0.5);
    LshPlan b = plan(200000, 0.9, 0.5);
    CHECK(b.m - a.m <= 1); // doubling N adds at most ceil(log2/log(1/p2)) = 1

    CHECK_THROWS_AS(plan(1, 0.9, 0.5), param_error);
    CHECK_THROWS_AS(plan(100, 0.5, 0.9), param_error);
    CHECK_THROWS_AS(plan(100, 1.0, 0.5), param_error);
}

TEST_CASE("collision probabilities") {
    CHECK(collision_prob_sparsehash(1.0) == 1.0);
    CHECK(collision_prob_minhash1bit(1.0) == 1.0);
    CHECK(collision_prob_sparsehash(0.0) == 0.5);
    CHECK(collision_prob_minhash1bit(0.0) == 0.5);
    CHECK(collision_prob_sparsehash(0.5) ==
          doctest::Approx(0.7937005259840998).epsilon(1e-12));
    CHECK(collision_prob_minhash1bit(0.5) == 0.75);
    CHECK(collision_prob_sparsehash(0.5) > collision_prob_minhash1bit(0.5));
}

TEST_CASE("tables_required") {
    CHECK(tables_required(0.5, 4, 1e-9) == 1);
    CHECK(tables_required(1.0, 16, 0.999) == 1);
    // golden: p = 2^(-1/3), m = 16, target 0.9 -> ceil(91.678...) = 92
    CHECK(tables_required(collision_prob_sparsehash(0.5), 16, 0.9) == 92);
    CHECK_THROWS_AS(tables_required(1e-300, 1000000, 0.5), param_error);
    CHECK_THROWS_AS(tables_required(0.5, 4, 0.0), param_error);
}

TEST_CASE("planner consistency: tables_required vs L = N^rho") {
    const double target = 1.0 - 1.0 / std::exp(1.0);
    for (double p1 : {0.7, 0.8, 0.9, 0.95}) {
        for (double p2 : {0.4, 0.5, 0.6}) {
            if (p2 >= p1) continue;
            for (uint64_t n : {100ULL, 1000ULL, 100000ULL}) {
                LshPlan pl = plan(n, p1, p2);
                uint64_t required = tables_required(p1, pl.m, target);
                CHECK(required <= 2 * pl.L);
            }
        }
    }
}

TEST_CASE("prop1 inequality over the millimesh grid") {
    std::vector<double> grid;
    for (int i = 0; i <= 1000; ++i) grid.push_back(double(i) / 1000.0);
    Prop1Report rep = prop1_check(grid, 16);
    CHECK(rep.holds);
    CHECK(rep.n_points == 1001);
    CHECK(rep.min_interior_margin > 1e-12);
    CHECK(rep.max_boundary_deviation <= 1e-15);
    CHECK(rep.max_table_ratio <= 1.0 + 1e-12);
}

namespace {

std::vector<SparseSet> planted_corpus(size_t n_pairs, size_t k, double j,
                                      uint64_t seed, double* achieved) {
    std::vector<SparseSet> out;
    out.reserve(2 * n_pairs);
    for (size_t t = 0; t < n_pairs; ++t) {
        auto pair = make_pair_with_jaccard(k, j, derive_seed(seed, t));
        *achieved = pair.achieved_j;
        out.push_back(std::move(pair.a));
        out.push_back(std::move(pair.b));
    }
    return out;
}

} // namespace

TEST_CASE("index from sketches: self-query hits, budget respected") {
    const size_t k = 60;
    double gamma = gamma_for_entropy(k);
    double achieved = 0.0;
    auto corpus = planted_corpus(40, k, 0.8, 5, &achieved);
    LshPlan pl = plan(corpus.size(), collision_prob_sparsehash(achieved),
                      collision_prob_sparsehash(0.2));
    SketchParams params{pl.L * pl.m, gamma, 64, HashSeed{8}, SketchMode::threshold};
    std::vector<BitSketch> sketches;
    for (const auto& s : corpus) sketches.push_back(sketch_threshold(params, s));
    LshIndex index = build_index(pl, sketches);

    for (size_t i = 0; i < sketches.size(); i += 7) {
        auto cands = query_index(index, sketches[i]);
        CHECK(cands.size() <= 3 * pl.L);
        bool self = false;
        for (const auto& c : cands)
            if (c.id == i) {
                self = true;
                CHECK(c.distance == 0);
            }
        CHECK(self);
    }

    // deterministic across repeated queries
    auto q1 = query_index(index, sketches[0]);
    auto q2 = query_index(index, sketches[0]);
    REQUIRE(q1.size() == q2.size());
    for (size_t i = 0; i < q1.size(); ++i) CHECK(q1[i].id == q2[i].id);
}

TEST_CASE("empty index returns no candidates") {
    LshPlan pl = plan(16, 0.9, 0.5);
    LshIndex index = build_index(pl, {});
    BitSketch q = BitSketch::zeros(pl.L * pl.m, 1234);
    CHECK(query_index(index, q).empty());
}

TEST_CASE("index rejects short sketches and mixed fingerprints") {
    LshPlan pl = plan(100, 0.9, 0.5);
    std::vector<BitSketch> sketches = {BitSketch::zeros(pl.L * pl.m - 1, 7)};
    CHECK_THROWS_AS(build_index(pl, sketches), param_error);

    std::vector<BitSketch> mixed = {BitSketch::zeros(pl.L * pl.m, 7),
                                    BitSketch::zeros(pl.L * pl.m, 8)};
    CHECK_THROWS_AS(build_index(pl, mixed), incomparable_error);

    std::vector<BitSketch> fine = {BitSketch::zeros(pl.L * pl.m, 7)};
    LshIndex index = build_index(pl, fine);
    BitSketch wrong = BitSketch::zeros(pl.L * pl.m, 8);
    CHECK_THROWS_AS(query_index(index, wrong), incomparable_error);
}

TEST_CASE("band codes slice the expected bits") {
    BitSketch s = BitSketch::zeros(128, 1);
    for (uint64_t i : {0ULL, 5ULL, 17ULL, 63ULL, 64ULL, 70ULL, 127ULL}) s.set_bit(i);
    // band of 17 bits, table 1 covers bits [17, 34)
    uint64_t code = band_code(s, 17, 1);
    for (int b = 0; b < 17; ++b) CHECK(((code >> b) & 1) == (s.bit(17 + b) ? 1u : 0u));
    // two different tables hash disjoint slices
    CHECK(band_code(s, 64, 0) == s.words[0]);
    CHECK(band_code(s, 64, 1) == s.words[1]);
}

TEST_CASE("candidate recall matches the planner law on planted pairs") {
    const size_t k = 230;
    const size_t n_pairs = 100;
    double gamma = gamma_for_entropy(k);
    double achieved = 0.0;
    auto corpus = planted_corpus(n_pairs, k, 0.7, 99, &achieved);
    double p1 = collision_prob_sparsehash(achieved);
    double p2 = collision_prob_sparsehash(0.2);
    LshPlan pl = plan(corpus.size(), p1, p2);
    double planned =
        1.0 - std::pow(1.0 - std::pow(p1, double(pl.m)), double(pl.L));

    size_t hits = 0, trials = 0;
    const int repeats = 6;
    for (int rep = 0; rep < repeats; ++rep) {
        LshIndex index =
            build_index_from_sets(pl, gamma, HashSeed{derive_seed(17, rep)},
                                  SketchMode::threshold, 0, corpus);
        for (size_t t = 0; t < n_pairs; ++t) {
            auto cands = query_index(index, index.items[2 * t]);
            ++trials;
            for (const auto& c : cands)
                if (c.id == 2 * t + 1) {
                    ++hits;
                    break;
                }
        }
    }
    double recall = double(hits) / double(trials);
    CHECK(std::abs(recall - planned) <
          test_util::binom_tol(planned, double(trials)) + 0.02);
}

TEST_CASE("windows-mode index from sets answers set queries") {
    const size_t k = 40;
    double gamma = gamma_for_entropy(k);
    double achieved = 0.0;
    auto corpus = planted_corpus(20, k, 0.9, 3, &achieved);
    LshPlan pl = plan(corpus.size(), collision_prob_sparsehash(achieved),
                      collision_prob_sparsehash(0.2));
    LshIndex index = build_index_from_sets(pl, gamma, HashSeed{5},
                                           SketchMode::windows, 777, corpus);
    size_t self_hits = 0;
    for (size_t i = 0; i < corpus.size(); ++i) {
        auto cands = query_index_set(index, corpus[i]);
        for (const auto& c : cands)
            if (c.id == i && c.distance == 0) ++self_hits;
    }
    CHECK(self_hits == corpus.size());
}
