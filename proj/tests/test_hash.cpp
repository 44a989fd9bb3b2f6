#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "sphash/hash.hpp"
#include "test_util.hpp"

using namespace sphash;

TEST_CASE("mix64 golden values") {
    CHECK(mix64(0) == 0);
    // Reference evaluation of the finalizer constants, frozen before the build.
    CHECK(mix64(1) == 0x5692161d100b05e5ULL);
    CHECK(mix64(2) == 0xdbd238973a2b148aULL);
    CHECK(mix64(0x9E3779B97F4A7C15ULL) == 0xe220a8397b1dcdafULL);
    CHECK(mix64(0xDEADBEEFULL) == 0x4e062702ec929eeaULL);
}

TEST_CASE("mix64 is deterministic") {
    for (uint64_t x : {0ULL, 1ULL, 42ULL, ~0ULL}) CHECK(mix64(x) == mix64(x));
}

TEST_CASE("family_hash golden values and determinism") {
    HashSeed seed{42};
    CHECK(family_hash(seed, 0, 7) == 0x16eb71ce90ebea5cULL);
    CHECK(family_hash(seed, 3, 123456789) == 0xbf0cf6d69c29d9f0ULL);
    CHECK(family_hash(seed, 5, 99) == family_hash(seed, 5, 99));
}

TEST_CASE("distinct measurement indices give distinct hashes") {
    HashSeed seed{7};
    SplitMix64 rng(123);
    int differ = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        uint64_t s = rng.next();
        if (family_hash(seed, 0, s) != family_hash(seed, 1, s)) ++differ;
    }
    CHECK(differ >= n * 99 / 100);
}

TEST_CASE("family_hash is uniform (Kolmogorov-Smirnov)") {
    HashSeed seed{2024};
    SplitMix64 rng(55);
    const size_t n = 100000;
    std::vector<double> u(n);
    for (auto& v : u)
        v = static_cast<double>(family_hash(seed, 3, rng.next())) * 0x1.0p-64;
    // critical value at level 0.001: sqrt(-ln(alpha/2)/2) / sqrt(n)
    double crit = 1.9494746035204051 / std::sqrt(static_cast<double>(n));
    CHECK(test_util::ks_statistic(std::move(u)) < crit);
}

TEST_CASE("fraction below gamma-threshold matches gamma") {
    HashSeed seed{31337};
    const size_t n = 1000000;
    for (double gamma : {0.003, 0.01, 0.1}) {
        uint64_t tau = static_cast<uint64_t>(gamma * 18446744073709551615.0);
        SplitMix64 rng(9000 + static_cast<uint64_t>(gamma * 1e4));
        size_t below = 0;
        for (size_t i = 0; i < n; ++i)
            if (family_hash(seed, 1, rng.next()) < tau) ++below;
        double frac = static_cast<double>(below) / static_cast<double>(n);
        CHECK(std::abs(frac - gamma) <
              test_util::binom_tol(gamma, static_cast<double>(n)));
    }
}

TEST_CASE("SplitMix64 determinism and bounded draws") {
    SplitMix64 a(99), b(99);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    SplitMix64 c(1);
    for (int i = 0; i < 1000; ++i) {
        CHECK(c.next_below(10) < 10);
        double d = c.next_double();
        CHECK(d >= 0.0);
        CHECK(d < 1.0);
    }
}
