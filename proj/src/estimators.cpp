#include "sphash/estimators.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "sphash/error.hpp"

namespace sphash {

namespace {

void check_comparable(const BitSketch& y, const BitSketch& z) {
    if (y.fingerprint != z.fingerprint || y.m != z.m)
        throw incomparable_error("sketches built under different parameters");
}

uint64_t common_zero_count(const BitSketch& y, const BitSketch& z) {
    // Trailing bits past m are zero in both sketches; mask the last word so
    // they do not count as common zeros.
    uint64_t n = 0;
    for (size_t w = 0; w < y.words.size(); ++w)
        n += std::popcount(~(y.words[w] | z.words[w]));
    uint64_t pad = y.words.size() * 64 - y.m;
    return n - pad;
}

} // namespace

const char* sim_method_name(SimMethod m) {
    switch (m) {
        case SimMethod::sim_sh: return "sim_sh";
        case SimMethod::hamming_inverted: return "hamming_inverted";
        case SimMethod::minhash: return "minhash";
        case SimMethod::minhash_1bit: return "minhash_1bit";
        case SimMethod::bottom_m: return "bottom_m";
    }
    return "?";
}

const char* undefined_reason_name(UndefinedReason r) {
    switch (r) {
        case UndefinedReason::none: return "none";
        case UndefinedReason::all_zero: return "all_zero";
        case UndefinedReason::no_common_zeros: return "no_common_zeros";
    }
    return "?";
}

double sim_union(const BitSketch& y, const BitSketch& z) {
    check_comparable(y, z);
    return static_cast<double>(common_zero_count(y, z)) / static_cast<double>(y.m);
}

double sim_intersection(const BitSketch& y, const BitSketch& z) {
    check_comparable(y, z);
    uint64_t both = common_zero_count(y, z);
    if (both == 0)
        throw undefined_similarity_error("sim_intersection: no common zero position");
    double zy = static_cast<double>(y.zero_count());
    double zz = static_cast<double>(z.zero_count());
    return zy * zz / (static_cast<double>(y.m) * static_cast<double>(both));
}

SimilarityEstimate sim_sh(const BitSketch& y, const BitSketch& z) {
    check_comparable(y, z);
    SimilarityEstimate est;
    est.method = SimMethod::sim_sh;
    uint64_t both = common_zero_count(y, z);
    if (both == 0) {
        est.reason = UndefinedReason::no_common_zeros;
        return est;
    }
    if (both == y.m) {
        // sim_union == 1: log ratio is 0/0.
        est.reason = UndefinedReason::all_zero;
        return est;
    }
    double s_union = static_cast<double>(both) / static_cast<double>(y.m);
    double s_inter = static_cast<double>(y.zero_count()) *
                     static_cast<double>(z.zero_count()) /
                     (static_cast<double>(y.m) * static_cast<double>(both));
    est.raw = std::log(s_inter) / std::log(s_union);
    est.value = std::clamp(est.raw, 0.0, 1.0);
    est.defined = true;
    return est;
}

uint64_t hamming(const BitSketch& y, const BitSketch& z) {
    check_comparable(y, z);
    uint64_t d = 0;
    for (size_t w = 0; w < y.words.size(); ++w)
        d += std::popcount(y.words[w] ^ z.words[w]);
    return d;
}

double normalized_hamming(const BitSketch& y, const BitSketch& z) {
    return static_cast<double>(hamming(y, z)) / static_cast<double>(y.m);
}

namespace {

double e_sh_value(uint64_t k1, uint64_t k2, double gamma, double j) {
    double base = 1.0 - gamma;
    double kd1 = static_cast<double>(k1);
    double kd2 = static_cast<double>(k2);
    return std::pow(base, kd1) + std::pow(base, kd2) -
           2.0 * std::pow(base, (kd1 + kd2) / (1.0 + j));
}

void check_model_domain(uint64_t k1, uint64_t k2, double gamma, double j) {
    if (!(gamma > 0.0) || !(gamma < 1.0))
        throw param_error("hamming model: gamma must be in (0,1)");
    if (k1 < 1 || k2 < 1) throw param_error("hamming model: k1, k2 must be >= 1");
    if (j < 0.0 || j > 1.0) throw param_error("hamming model: J must be in [0,1]");
}

} // namespace

HammingModel expected_hamming(uint64_t k1, uint64_t k2, double gamma, double j,
                              uint64_t m) {
    check_model_domain(k1, k2, gamma, j);
    if (m < 1) throw param_error("hamming model: m must be >= 1");
    HammingModel hm;
    hm.k1 = k1;
    hm.k2 = k2;
    hm.m = m;
    hm.gamma = gamma;
    hm.j = j;
    hm.e_sh = e_sh_value(k1, k2, gamma, j);
    hm.v_hat = (1.0 - hm.e_sh) * hm.e_sh / static_cast<double>(m);
    return hm;
}

double expected_hamming_entropy(double j) {
    return 1.0 - std::exp2((j - 1.0) / (1.0 + j));
}

SimilarityEstimate invert_hamming(double normalized_distance, uint64_t k1,
                                  uint64_t k2, double gamma) {
    check_model_domain(k1, k2, gamma, 0.0);
    SimilarityEstimate est;
    est.method = SimMethod::hamming_inverted;
    est.raw = normalized_distance;
    // e_sh is strictly decreasing in J: clamp the observation into the
    // attainable range, then bisect.
    double lo_e = e_sh_value(k1, k2, gamma, 1.0); // at J=1 (smallest)
    double hi_e = e_sh_value(k1, k2, gamma, 0.0); // at J=0 (largest)
    double d = std::clamp(normalized_distance, lo_e, hi_e);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        double mid = 0.5 * (lo + hi);
        if (e_sh_value(k1, k2, gamma, mid) > d)
            lo = mid; // distance too large -> J below mid
        else
            hi = mid;
    }
    est.value = 0.5 * (lo + hi);
    est.defined = true;
    return est;
}

} // namespace sphash
