#include "sphash/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>

#include "sphash/error.hpp"
#include "sphash/minhash.hpp"
#include "sphash/parallel.hpp"
#include "sphash/sparse_set.hpp"

namespace sphash {

uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b, uint64_t c) {
    uint64_t h = mix64(base ^ (a + 1) * kGoldenStride);
    h = mix64(h ^ (b + 1) * kGoldenStride);
    return mix64(h ^ (c + 1) * kGoldenStride);
}

BitSketch prefix_sketch(const BitSketch& s, uint64_t m, uint64_t fingerprint) {
    if (m > s.m) throw param_error("prefix_sketch: prefix longer than sketch");
    BitSketch out;
    out.m = m;
    out.fingerprint = fingerprint;
    out.words.assign(s.words.begin(),
                     s.words.begin() + static_cast<ptrdiff_t>((m + 63) / 64));
    if (m % 64 != 0) out.words.back() &= (uint64_t(1) << (m % 64)) - 1;
    return out;
}

std::vector<HammingValidationRow> hamming_validation(
    size_t k, uint64_t m, size_t runs, std::span<const double> j_grid,
    uint64_t seed, unsigned threads) {
    double gamma = gamma_for_entropy(k);
    std::vector<HammingValidationRow> rows(j_grid.size());
    for (size_t ji = 0; ji < j_grid.size(); ++ji) {
        std::vector<double> dist(runs);
        double achieved = 0.0;
        std::mutex achieved_mu;
        parallel_for(runs, threads, [&](size_t begin, size_t end) {
            double local_achieved = 0.0;
            for (size_t r = begin; r < end; ++r) {
                JaccardPair pair = make_pair_with_jaccard(
                    k, j_grid[ji], derive_seed(seed, ji, r, 0));
                SketchParams params{m, gamma, 64,
                                    HashSeed{derive_seed(seed, ji, r, 1)},
                                    SketchMode::threshold};
                BitSketch ya = sketch_threshold(params, pair.a);
                BitSketch yb = sketch_threshold(params, pair.b);
                dist[r] = normalized_hamming(ya, yb);
                local_achieved = pair.achieved_j;
            }
            std::lock_guard<std::mutex> lk(achieved_mu);
            achieved = local_achieved; // same snap for every run at this J
        });
        double mean = 0.0;
        for (double d : dist) mean += d;
        mean /= static_cast<double>(runs);
        double var = 0.0;
        for (double d : dist) var += (d - mean) * (d - mean);
        var /= static_cast<double>(runs > 1 ? runs - 1 : 1);
        HammingModel model = expected_hamming(k, k, gamma, achieved, m);
        rows[ji] = {j_grid[ji], achieved, mean, var, model.e_sh, model.v_hat};
    }
    return rows;
}

std::vector<ConcentrationRow> simsh_concentration(
    size_t k, uint64_t m, size_t pairs, std::span<const double> j_grid,
    uint64_t seed, unsigned threads) {
    double gamma = gamma_for_entropy(k);
    std::vector<ConcentrationRow> rows(j_grid.size());
    for (size_t ji = 0; ji < j_grid.size(); ++ji) {
        std::vector<double> errors(pairs, 0.0);
        std::vector<double> estimates(pairs, 0.0);
        std::vector<uint8_t> undefined(pairs, 0);
        double achieved = 0.0;
        std::mutex mu;
        parallel_for(pairs, threads, [&](size_t begin, size_t end) {
            double local_achieved = 0.0;
            for (size_t r = begin; r < end; ++r) {
                JaccardPair pair = make_pair_with_jaccard(
                    k, j_grid[ji], derive_seed(seed, ji, r, 2));
                SketchParams params{m, gamma, 64,
                                    HashSeed{derive_seed(seed, ji, r, 3)},
                                    SketchMode::threshold};
                BitSketch ya = sketch_threshold(params, pair.a);
                BitSketch yb = sketch_threshold(params, pair.b);
                SimilarityEstimate est = sim_sh(ya, yb);
                if (!est.defined) {
                    undefined[r] = 1;
                    errors[r] = 1.0; // count an undefined estimate as a full miss
                } else {
                    estimates[r] = est.value;
                    errors[r] = std::abs(est.value - pair.achieved_j);
                }
                local_achieved = pair.achieved_j;
            }
            std::lock_guard<std::mutex> lk(mu);
            achieved = local_achieved;
        });
        ConcentrationRow row;
        row.j_target = j_grid[ji];
        row.j_achieved = achieved;
        size_t defined_count = 0;
        for (size_t r = 0; r < pairs; ++r) {
            if (undefined[r]) {
                ++row.undefined_count;
                continue;
            }
            row.mean_estimate += estimates[r];
            ++defined_count;
        }
        if (defined_count > 0)
            row.mean_estimate /= static_cast<double>(defined_count);
        row.max_abs_error = *std::max_element(errors.begin(), errors.end());
        rows[ji] = row;
    }
    return rows;
}

namespace {

struct MethodCounts {
    uint64_t tp = 0;
    uint64_t retrieved = 0;
};

// Memoized Hamming inversion for corpora with uniform support size: the
// distance takes at most m+1 values.
class InversionTable {
public:
    InversionTable(uint64_t m, uint64_t k1, uint64_t k2, double gamma)
        : values_(m + 1) {
        for (uint64_t d = 0; d <= m; ++d)
            values_[d] = invert_hamming(static_cast<double>(d) / static_cast<double>(m),
                                        k1, k2, gamma)
                             .value;
    }
    double operator[](uint64_t d) const { return values_[d]; }

private:
    std::vector<double> values_;
};

} // namespace

std::vector<PrRow> eval_pr(std::span<const SparseSet> corpus, const PrConfig& config) {
    const size_t n = corpus.size();
    if (n < 2) throw param_error("eval_pr: need at least 2 items");
    if (config.m_grid.empty() || config.thresholds.empty() || config.repeats < 1)
        throw param_error("eval_pr: empty grid or repeats < 1");

    CorpusStats stats = corpus_stats(corpus);
    if (stats.k_min == 0) throw param_error("eval_pr: empty item in corpus");
    double gamma = config.gamma;
    if (gamma == 0.0)
        gamma = gamma_for_entropy(static_cast<uint64_t>(std::llround(stats.k_mean)));
    bool uniform_k = stats.k_min == stats.k_max;

    // Exact ground truth for every unordered pair, packed row-major.
    const size_t n_pairs = n * (n - 1) / 2;
    std::vector<double> truth(n_pairs);
    std::vector<uint32_t> pair_i(n_pairs), pair_j(n_pairs);
    {
        size_t idx = 0;
        for (uint32_t i = 0; i < n; ++i)
            for (uint32_t j = i + 1; j < n; ++j) {
                pair_i[idx] = i;
                pair_j[idx] = j;
                ++idx;
            }
        parallel_for(n_pairs, config.threads, [&](size_t begin, size_t end) {
            for (size_t p = begin; p < end; ++p)
                truth[p] = jaccard_exact(corpus[pair_i[p]], corpus[pair_j[p]]);
        });
    }

    const uint64_t m_max = *std::max_element(config.m_grid.begin(), config.m_grid.end());
    const size_t n_methods = 3;
    const SimMethod methods[n_methods] = {SimMethod::sim_sh,
                                          SimMethod::hamming_inverted,
                                          SimMethod::minhash_1bit};

    // counts[(m, threshold, method)][repeat]
    auto cell = [&](size_t mi, size_t ti, size_t me) {
        return (mi * config.thresholds.size() + ti) * n_methods + me;
    };
    std::vector<std::vector<MethodCounts>> counts(
        config.m_grid.size() * config.thresholds.size() * n_methods,
        std::vector<MethodCounts>(config.repeats));

    for (int rep = 0; rep < config.repeats; ++rep) {
        uint64_t rep_seed = derive_seed(config.seed, static_cast<uint64_t>(rep), 10);
        SketchParams base_params{m_max, gamma, 64, HashSeed{rep_seed},
                                 SketchMode::threshold};
        std::vector<BitSketch> sh(n);
        std::vector<MinHashSketch> mh(n);
        parallel_for(n, config.threads, [&](size_t begin, size_t end) {
            for (size_t i = begin; i < end; ++i) {
                sh[i] = sketch_threshold(base_params, corpus[i]);
                mh[i] = minhash_1bit(m_max, HashSeed{rep_seed}, corpus[i]);
            }
        });

        for (size_t mi = 0; mi < config.m_grid.size(); ++mi) {
            const uint64_t m = config.m_grid[mi];
            SketchParams mp = base_params;
            mp.m = m;
            const uint64_t sh_fp = params_fingerprint(mp);
            const uint64_t mh_fp =
                minhash_fingerprint(MinHashVariant::one_bit, m, HashSeed{rep_seed});
            std::vector<BitSketch> sh_m(n);
            std::vector<MinHashSketch> mh_m(n);
            for (size_t i = 0; i < n; ++i) {
                sh_m[i] = prefix_sketch(sh[i], m, sh_fp);
                mh_m[i].variant = MinHashVariant::one_bit;
                mh_m[i].m = m;
                mh_m[i].fingerprint = mh_fp;
                mh_m[i].words.assign(
                    mh[i].words.begin(),
                    mh[i].words.begin() + static_cast<ptrdiff_t>((m + 63) / 64));
                if (m % 64 != 0)
                    mh_m[i].words.back() &= (uint64_t(1) << (m % 64)) - 1;
            }

            InversionTable inversion(m, stats.k_min, stats.k_min, gamma);

            const size_t n_cells = config.thresholds.size() * n_methods;
            std::vector<std::vector<MethodCounts>> partial;
            std::mutex partial_mu;
            parallel_for(n_pairs, config.threads, [&](size_t begin, size_t end) {
                std::vector<MethodCounts> local(n_cells);
                for (size_t p = begin; p < end; ++p) {
                    const uint32_t i = pair_i[p], j = pair_j[p];
                    double est[n_methods];
                    uint64_t d = hamming(sh_m[i], sh_m[j]);
                    est[1] = uniform_k
                                 ? inversion[d]
                                 : invert_hamming(static_cast<double>(d) /
                                                      static_cast<double>(m),
                                                  corpus[i].k(), corpus[j].k(), gamma)
                                       .value;
                    // undefined sim_sh falls back to the inverted estimate
                    SimilarityEstimate e_sh_est = sim_sh(sh_m[i], sh_m[j]);
                    est[0] = e_sh_est.defined ? e_sh_est.value : est[1];
                    est[2] = estimate_minhash_1bit(mh_m[i], mh_m[j]).value;
                    for (size_t ti = 0; ti < config.thresholds.size(); ++ti) {
                        const double th = config.thresholds[ti];
                        // similar: exact J strictly above the threshold;
                        // retrieved: estimate at or above it
                        const bool positive = truth[p] > th;
                        for (size_t me = 0; me < n_methods; ++me) {
                            if (est[me] >= th) {
                                auto& c = local[ti * n_methods + me];
                                ++c.retrieved;
                                if (positive) ++c.tp;
                            }
                        }
                    }
                }
                std::lock_guard<std::mutex> lk(partial_mu);
                partial.push_back(std::move(local));
            });
            for (const auto& local : partial)
                for (size_t ti = 0; ti < config.thresholds.size(); ++ti)
                    for (size_t me = 0; me < n_methods; ++me) {
                        auto& c = counts[cell(mi, ti, me)][rep];
                        c.tp += local[ti * n_methods + me].tp;
                        c.retrieved += local[ti * n_methods + me].retrieved;
                    }
        }
    }

    // Positive-class sizes depend only on the ground truth.
    std::vector<uint64_t> positives(config.thresholds.size(), 0);
    for (size_t ti = 0; ti < config.thresholds.size(); ++ti)
        for (size_t p = 0; p < n_pairs; ++p)
            if (truth[p] > config.thresholds[ti]) ++positives[ti];

    std::vector<PrRow> rows;
    for (size_t mi = 0; mi < config.m_grid.size(); ++mi)
        for (size_t ti = 0; ti < config.thresholds.size(); ++ti)
            for (size_t me = 0; me < n_methods; ++me) {
                double mean_p = 0.0, mean_r = 0.0;
                for (int rep = 0; rep < config.repeats; ++rep) {
                    const auto& c = counts[cell(mi, ti, me)][rep];
                    PrRow row;
                    row.m = config.m_grid[mi];
                    row.threshold = config.thresholds[ti];
                    row.method = methods[me];
                    row.repeat = rep;
                    row.tp = c.tp;
                    row.retrieved = c.retrieved;
                    row.positives = positives[ti];
                    row.empty_positive_class = positives[ti] == 0;
                    row.precision = c.retrieved == 0
                                        ? 1.0
                                        : static_cast<double>(c.tp) /
                                              static_cast<double>(c.retrieved);
                    row.recall = positives[ti] == 0
                                     ? 0.0
                                     : static_cast<double>(c.tp) /
                                           static_cast<double>(positives[ti]);
                    mean_p += row.precision;
                    mean_r += row.recall;
                    rows.push_back(row);
                }
                PrRow mean_row = rows.back();
                mean_row.repeat = -1;
                mean_row.precision = mean_p / config.repeats;
                mean_row.recall = mean_r / config.repeats;
                rows.push_back(mean_row);
            }
    return rows;
}

BenchCell bench_cell(uint64_t k, uint64_t m, SketchMode mode, double gamma,
                     uint64_t seed, int reps) {
    using clock = std::chrono::steady_clock;
    BenchCell cell;
    cell.k = k;
    cell.m = m;
    cell.mode = mode;
    // 1 bit per measurement, against 64 bits for a classic minhash value.
    cell.sketch_bytes = (m + 7) / 8;
    cell.minhash_bytes = 8 * m;

    std::vector<uint64_t> ids(k);
    SplitMix64 rng(derive_seed(seed, k, m, uint64_t(mode)));
    for (auto& v : ids) v = rng.next();
    SparseSet s = SparseSet::from_unsorted(std::move(ids));

    SketchParams params{m, gamma, 64, HashSeed{derive_seed(seed, 1, 2, 3)}, mode};
    double best = std::numeric_limits<double>::infinity();
    if (mode == SketchMode::threshold) {
        for (int r = 0; r < reps; ++r) {
            SketchWorkCounters work;
            auto t0 = clock::now();
            BitSketch out = sketch_threshold(params, s, &work);
            auto t1 = clock::now();
            best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
            if (r == 0) {
                cell.hashes = work.hashes;
                cell.comparisons = work.comparisons;
            }
            (void)out;
        }
    } else {
        auto t0 = clock::now();
        WindowSet w = draw_windows(params, derive_seed(seed, 4, 5, 6));
        WindowTree tree = build_tree(w);
        auto t1 = clock::now();
        cell.setup_sec = std::chrono::duration<double>(t1 - t0).count();
        for (int r = 0; r < reps; ++r) {
            SketchWorkCounters work;
            auto t2 = clock::now();
            BitSketch out = sketch_windows(params, w, tree, s, &work);
            auto t3 = clock::now();
            best = std::min(best, std::chrono::duration<double>(t3 - t2).count());
            if (r == 0) {
                cell.hashes = work.hashes;
                cell.comparisons = work.comparisons;
            }
            (void)out;
        }
    }
    cell.sketch_sec = best;
    return cell;
}

} // namespace sphash
