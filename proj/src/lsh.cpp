#include "sphash/lsh.hpp"

#include <algorithm>
#include <cmath>

#include "sphash/error.hpp"

namespace sphash {

LshPlan plan(uint64_t n_items, double p1, double p2) {
    if (n_items < 2) throw param_error("lsh plan: N must be >= 2");
    if (!(p2 > 0.0) || !(p1 < 1.0) || !(p2 < p1))
        throw param_error("lsh plan: need 0 < p2 < p1 < 1");
    LshPlan pl;
    pl.p1 = p1;
    pl.p2 = p2;
    pl.r1 = 1.0 - p1;
    pl.r2 = 1.0 - p2;
    double log_n = std::log(static_cast<double>(n_items));
    pl.m = static_cast<uint64_t>(std::ceil(log_n / std::log(1.0 / p2)));
    pl.rho = std::log(1.0 / p1) / std::log(1.0 / p2);
    pl.L = static_cast<uint64_t>(std::ceil(std::exp(pl.rho * log_n)));
    return pl;
}

double collision_prob_sparsehash(double j) {
    if (j < 0.0 || j > 1.0) throw param_error("collision prob: J must be in [0,1]");
    return std::exp2((j - 1.0) / (1.0 + j));
}

double collision_prob_minhash1bit(double j) {
    if (j < 0.0 || j > 1.0) throw param_error("collision prob: J must be in [0,1]");
    return (j + 1.0) / 2.0;
}

uint64_t tables_required(double p, uint64_t m, double target) {
    if (!(p > 0.0) || p > 1.0) throw param_error("tables_required: p must be in (0,1]");
    if (!(target > 0.0) || !(target < 1.0))
        throw param_error("tables_required: target must be in (0,1)");
    double pm = std::pow(p, static_cast<double>(m));
    if (pm >= 1.0) return 1;
    if (pm <= 0.0)
        throw param_error("tables_required: p^m underflows, plan infeasible");
    double l = std::log(1.0 - target) / std::log1p(-pm);
    uint64_t out = static_cast<uint64_t>(std::ceil(l));
    return std::max<uint64_t>(out, 1);
}

Prop1Report prop1_check(std::span<const double> j_grid, uint64_t m) {
    Prop1Report rep;
    rep.n_points = j_grid.size();
    rep.min_interior_margin = std::numeric_limits<double>::infinity();
    rep.max_boundary_deviation = 0.0;
    rep.max_table_ratio = 0.0;
    bool ok = true;
    for (double j : j_grid) {
        double p_sh = collision_prob_sparsehash(j);
        double p_mh = collision_prob_minhash1bit(j);
        double margin = p_sh - p_mh;
        bool boundary = (j == 0.0 || j == 1.0);
        if (boundary) {
            rep.max_boundary_deviation =
                std::max(rep.max_boundary_deviation, std::abs(margin));
            if (std::abs(margin) > 1e-15) ok = false;
        } else {
            rep.min_interior_margin = std::min(rep.min_interior_margin, margin);
            if (!(margin > 0.0)) ok = false;
        }
        // Table-count ratio at equal m and equal candidate probability.
        double ratio;
        if (j >= 1.0) {
            ratio = 1.0; // both collide surely; one table each
        } else {
            double sh_m = std::pow(p_sh, static_cast<double>(m));
            double mh_m = std::pow(p_mh, static_cast<double>(m));
            ratio = std::log1p(-mh_m) / std::log1p(-sh_m);
        }
        rep.max_table_ratio = std::max(rep.max_table_ratio, ratio);
        if (!(ratio <= 1.0 + 1e-12)) ok = false;
    }
    rep.holds = ok;
    return rep;
}

uint64_t band_code(const BitSketch& sketch, uint64_t band_bits, uint64_t table) {
    const uint64_t begin = table * band_bits;
    uint64_t code = 0;
    if (band_bits <= 64) {
        // Gather up to 64 bits straddling at most two words.
        uint64_t word = begin >> 6;
        uint64_t shift = begin & 63;
        code = sketch.words[word] >> shift;
        if (shift != 0 && word + 1 < sketch.words.size())
            code |= sketch.words[word + 1] << (64 - shift);
        if (band_bits < 64) code &= (uint64_t(1) << band_bits) - 1;
        return code;
    }
    code = 0x51ED2701A2D3E4F5ULL;
    for (uint64_t off = 0; off < band_bits; off += 64) {
        uint64_t chunk_bits = std::min<uint64_t>(64, band_bits - off);
        uint64_t word = (begin + off) >> 6;
        uint64_t shift = (begin + off) & 63;
        uint64_t chunk = sketch.words[word] >> shift;
        if (shift != 0 && word + 1 < sketch.words.size())
            chunk |= sketch.words[word + 1] << (64 - shift);
        if (chunk_bits < 64) chunk &= (uint64_t(1) << chunk_bits) - 1;
        code = mix64(code ^ chunk);
    }
    return code;
}

namespace {

void insert_item(LshIndex& index, uint32_t id) {
    for (uint64_t t = 0; t < index.lsh_plan.L; ++t) {
        uint64_t code = band_code(index.items[id], index.lsh_plan.m, t);
        index.tables[t][code].push_back(id);
    }
}

} // namespace

LshIndex build_index(const LshPlan& plan, std::span<const BitSketch> sketches) {
    LshIndex index;
    index.lsh_plan = plan;
    index.tables.resize(plan.L);
    const uint64_t need = plan.L * plan.m;
    for (const auto& s : sketches) {
        if (s.m < need)
            throw param_error("build_index: sketch has " + std::to_string(s.m) +
                              " bits, plan needs L*m = " + std::to_string(need));
        if (index.items.empty())
            index.sketch_fingerprint = s.fingerprint;
        else if (s.fingerprint != index.sketch_fingerprint)
            throw incomparable_error("build_index: mixed sketch fingerprints");
        index.items.push_back(s);
        index.item_support.push_back(0);
    }
    for (uint32_t id = 0; id < index.items.size(); ++id) insert_item(index, id);
    return index;
}

namespace {

// Per-table seed: offsetting the base by t*m golden strides makes the
// per-table families coincide with the slices of one long sketch.
HashSeed table_seed(uint64_t seed_base, uint64_t band_bits, uint64_t t) {
    return HashSeed{seed_base + t * band_bits * kGoldenStride};
}

BitSketch sketch_for_index(const LshIndex& index, const SparseSet& s) {
    const uint64_t band = index.lsh_plan.m;
    const uint64_t total = index.lsh_plan.L * band;
    if (index.mode == SketchMode::threshold) {
        SketchParams p{total, index.gamma, 64, HashSeed{index.seed_base},
                       SketchMode::threshold};
        return sketch_threshold(p, s);
    }
    // Windows mode: independent window draw per table, bits concatenated.
    BitSketch out = BitSketch::zeros(total, 0);
    uint64_t fp = mix64(index.seed_base ^ 0x685835B1F1A4A1B7ULL);
    for (uint64_t t = 0; t < index.lsh_plan.L; ++t) {
        SketchParams p{band, index.gamma, 64,
                       table_seed(index.seed_base, band, t), SketchMode::windows};
        uint64_t wseed = mix64(index.window_seed_base ^ (t + 1) * kGoldenStride);
        WindowSet w = draw_windows(p, wseed);
        BitSketch part = sketch_windows(p, w, s);
        for (uint64_t i = 0; i < band; ++i)
            if (part.bit(i)) out.set_bit(t * band + i);
        fp = mix64(fp ^ part.fingerprint);
    }
    out.fingerprint = fp;
    return out;
}

} // namespace

LshIndex build_index_from_sets(const LshPlan& plan, double gamma, HashSeed seed,
                               SketchMode mode, uint64_t window_seed_base,
                               std::span<const SparseSet> sets) {
    LshIndex index;
    index.lsh_plan = plan;
    index.mode = mode;
    index.gamma = gamma;
    index.seed_base = seed.base;
    index.window_seed_base = window_seed_base;
    index.from_sets = true;
    index.tables.resize(plan.L);
    for (const auto& s : sets) {
        BitSketch sk = sketch_for_index(index, s);
        if (index.items.empty()) index.sketch_fingerprint = sk.fingerprint;
        index.items.push_back(std::move(sk));
        index.item_support.push_back(s.k());
    }
    for (uint32_t id = 0; id < index.items.size(); ++id) insert_item(index, id);
    return index;
}

std::vector<LshCandidate> query_index(const LshIndex& index, const BitSketch& q) {
    if (!index.items.empty() && q.fingerprint != index.sketch_fingerprint)
        throw incomparable_error("query: sketch fingerprint does not match index");
    const uint64_t budget = 3 * index.lsh_plan.L;
    std::vector<LshCandidate> out;
    std::vector<bool> seen(index.items.size(), false);
    for (uint64_t t = 0; t < index.lsh_plan.L && out.size() < budget; ++t) {
        uint64_t code = band_code(q, index.lsh_plan.m, t);
        auto it = index.tables[t].find(code);
        if (it == index.tables[t].end()) continue;
        for (uint32_t id : it->second) {
            if (out.size() >= budget) break;
            if (seen[id]) continue;
            seen[id] = true;
            LshCandidate c;
            c.id = id;
            c.distance = hamming(q, index.items[id]);
            c.normalized = static_cast<double>(c.distance) / static_cast<double>(q.m);
            out.push_back(c);
        }
    }
    return out;
}

std::vector<LshCandidate> query_index_set(const LshIndex& index, const SparseSet& q) {
    if (!index.from_sets)
        throw param_error("query_index_set: index was not built from raw sets");
    return query_index(index, sketch_for_index(index, q));
}

} // namespace sphash
