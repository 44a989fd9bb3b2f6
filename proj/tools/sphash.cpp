#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sphash/error.hpp"
#include "sphash/experiments.hpp"
#include "sphash/ingest.hpp"
#include "sphash/io.hpp"
#include "sphash/lsh.hpp"
#include "sphash/minhash.hpp"
#include "sphash/parallel.hpp"
#include "sphash/sketch.hpp"
#include "sphash/synthetic.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace sphash;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitParam = 3;
constexpr int kExitIncomparable = 4;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

std::vector<SparseSet> read_sets(const std::string& path, const std::string& format,
                                 unsigned kappa, bool canonical, bool per_record) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open input: " + path);
    if (format == "docword") return parse_docword(in).docs;
    if (format == "fasta") {
        if (per_record) return fasta_kmers_per_record(in, kappa, canonical);
        std::vector<SparseSet> one;
        one.push_back(fasta_kmers(in, kappa, canonical));
        return one;
    }
    if (format == "idset") return parse_idset(in);
    throw param_error("unknown format: " + format);
}

std::ofstream open_text_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open output: " + path);
    return out;
}

struct GammaChoice {
    double gamma = 0.0;
    uint64_t k_for_gamma = 0;

    double resolve(std::span<const SparseSet> sets) const {
        if (gamma > 0.0) return gamma;
        if (k_for_gamma > 0) return gamma_for_entropy(k_for_gamma);
        CorpusStats st = corpus_stats(sets);
        if (st.n_docs == 0 || st.k_mean < 1.0)
            throw param_error("cannot derive gamma from an empty corpus; "
                              "pass --gamma or --k-for-gamma");
        return gamma_for_entropy(static_cast<uint64_t>(std::llround(st.k_mean)));
    }
};

void add_gamma_flags(CLI::App* cmd, GammaChoice& gc) {
    auto* g = cmd->add_option("--gamma", gc.gamma,
                              "sparsification probability in (0,1)");
    auto* k = cmd->add_option("--k-for-gamma", gc.k_for_gamma,
                              "derive gamma = 1 - 2^(-1/k)");
    g->excludes(k);
    k->excludes(g);
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<uint64_t> parse_u64_list(const std::string& text) {
    std::vector<uint64_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoull(tok));
    }
    return out;
}

// ---------------------------------------------------------------- sketch ---

struct SketchArgs {
    std::string in, format = "idset", out_dir;
    std::string mode = "threshold";
    uint64_t m = 64;
    GammaChoice gamma;
    uint64_t seed = 1;
    unsigned kappa = 21;
    bool canonical = false;
    bool per_record = false;
    unsigned threads = 0;
};

int cmd_sketch(const SketchArgs& a) {
    double t_start = now_seconds();
    auto sets = read_sets(a.in, a.format, a.kappa, a.canonical, a.per_record);
    SketchParams params;
    params.m = a.m;
    params.gamma = a.gamma.resolve(sets);
    params.seed = HashSeed{a.seed};
    params.mode = a.mode == "windows" ? SketchMode::windows : SketchMode::threshold;
    params.validate();

    fs::create_directories(a.out_dir);
    WindowSet windows;
    WindowTree tree;
    uint64_t window_seed = 0;
    if (params.mode == SketchMode::windows) {
        window_seed = mix64(a.seed ^ kGoldenStride);
        windows = draw_windows(params, window_seed);
        tree = build_tree(windows);
        save_windows_file((fs::path(a.out_dir) / "windows.sphw").string(), windows);
    }

    std::vector<BitSketch> sketches(sets.size());
    parallel_for(sets.size(), a.threads, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i)
            sketches[i] = params.mode == SketchMode::windows
                              ? sketch_windows(params, windows, tree, sets[i])
                              : sketch_threshold(params, sets[i]);
    });

    json manifest;
    manifest["command"] = "sketch";
    manifest["params"] = {
        {"mode", a.mode},        {"m", params.m},
        {"gamma", params.gamma}, {"b", params.b},
        {"seed", a.seed},        {"window_seed", window_seed},
        {"fingerprint", params_fingerprint(params, window_seed)},
    };
    manifest["input"] = {{"path", a.in},
                         {"format", a.format},
                         {"kappa", a.kappa},
                         {"canonical", a.canonical},
                         {"per_record", a.per_record}};
    manifest["count"] = sets.size();
    json items = json::array();
    for (size_t i = 0; i < sets.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "item_%05zu.sphs", i);
        save_sketch_file((fs::path(a.out_dir) / name).string(), sketches[i], params);
        items.push_back({{"file", name}, {"k", sets[i].k()}});
    }
    manifest["items"] = items;
    manifest["timing_sec"] = now_seconds() - t_start;
    auto mf = open_text_out((fs::path(a.out_dir) / "manifest.json").string());
    mf << manifest.dump(2) << "\n";
    std::cout << "sketched " << sets.size() << " items to " << a.out_dir << "\n";
    return kExitOk;
}

// --------------------------------------------------------------- compare ---

struct CompareArgs {
    std::string sketch_dir;
    std::string sets_path, format = "idset";
    unsigned kappa = 21;
    bool canonical = false;
    bool per_record = false;
    std::string methods = "sim_sh,hamming_inverted";
    std::string out = "-";
    std::string summary_path;
    std::string pairs; // optional explicit "i:j,i:j" list (self-pairs allowed)
    uint64_t mh_m = 0; // m for on-the-fly minhash baselines; 0 -> sketch m
    unsigned threads = 0;
};

struct LoadedCorpusSketches {
    std::vector<BitSketch> bits;
    std::vector<uint64_t> item_k;
    SketchFileHeader header;
};

LoadedCorpusSketches load_sketch_dir(const std::string& dir) {
    LoadedCorpusSketches out;
    fs::path manifest_path = fs::path(dir) / "manifest.json";
    std::vector<fs::path> files;
    if (fs::exists(manifest_path)) {
        std::ifstream mf(manifest_path);
        json manifest = json::parse(mf, nullptr, false);
        if (manifest.is_discarded())
            throw parse_error("malformed manifest: " + manifest_path.string());
        for (const auto& item : manifest["items"]) {
            files.push_back(fs::path(dir) / item["file"].get<std::string>());
            out.item_k.push_back(item["k"].get<uint64_t>());
        }
    } else {
        for (const auto& e : fs::directory_iterator(dir))
            if (e.path().extension() == ".sphs") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        out.item_k.assign(files.size(), 0);
    }
    for (size_t i = 0; i < files.size(); ++i) {
        LoadedSketch ls = load_sketch_file(files[i].string());
        if (!ls.is_bits)
            throw parse_error("compare expects bit sketches: " + files[i].string());
        if (i == 0) out.header = ls.header;
        out.bits.push_back(std::move(ls.bits));
    }
    return out;
}

int cmd_compare(const CompareArgs& a) {
    LoadedCorpusSketches corpus;
    if (!a.sketch_dir.empty()) corpus = load_sketch_dir(a.sketch_dir);

    std::vector<SparseSet> sets;
    if (!a.sets_path.empty())
        sets = read_sets(a.sets_path, a.format, a.kappa, a.canonical, a.per_record);

    size_t n = corpus.bits.empty() ? sets.size() : corpus.bits.size();
    if (n < 2 && a.pairs.empty())
        throw param_error("compare: need at least 2 items");
    if (!sets.empty() && !corpus.bits.empty() && sets.size() != corpus.bits.size())
        throw param_error("compare: sketch dir and sets disagree on item count");

    std::vector<std::pair<size_t, size_t>> pair_list;
    if (!a.pairs.empty()) {
        std::stringstream ss(a.pairs);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            auto colon = tok.find(':');
            if (colon == std::string::npos)
                throw param_error("bad --pairs entry: " + tok);
            pair_list.push_back({std::stoull(tok.substr(0, colon)),
                                 std::stoull(tok.substr(colon + 1))});
        }
    } else {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) pair_list.push_back({i, j});
    }

    std::vector<std::string> methods;
    {
        std::stringstream ss(a.methods);
        std::string tok;
        while (std::getline(ss, tok, ',')) methods.push_back(tok);
    }
    auto need = [&](const char* name) {
        return std::find(methods.begin(), methods.end(), name) != methods.end();
    };

    // On-the-fly baselines when raw sets are available.
    uint64_t mh_m = a.mh_m ? a.mh_m : (corpus.bits.empty() ? 64 : corpus.header.m);
    HashSeed mh_seed{corpus.bits.empty() ? uint64_t(1) : corpus.header.seed};
    std::vector<MinHashSketch> mh_classic, mh_bits, mh_bottom;
    if (!sets.empty()) {
        if (need("minhash")) mh_classic.resize(sets.size());
        if (need("minhash_1bit")) mh_bits.resize(sets.size());
        if (need("bottom_m")) mh_bottom.resize(sets.size());
        parallel_for(sets.size(), a.threads, [&](size_t begin, size_t end) {
            for (size_t i = begin; i < end; ++i) {
                if (!mh_classic.empty())
                    mh_classic[i] = minhash_classic(mh_m, mh_seed, sets[i]);
                if (!mh_bits.empty())
                    mh_bits[i] = minhash_1bit(mh_m, mh_seed, sets[i]);
                if (!mh_bottom.empty())
                    mh_bottom[i] = bottom_m(mh_m, mh_seed, sets[i]);
            }
        });
    }

    std::ostream* outp = &std::cout;
    std::ofstream out_file;
    if (a.out != "-") {
        out_file = open_text_out(a.out);
        outp = &out_file;
    }
    std::ostream& out = *outp;
    out << "i,j,method,estimate,defined,raw\n";
    out.precision(12);

    struct Accum {
        double se_sum = 0.0;
        size_t count = 0;
        size_t undefined = 0;
    };
    std::map<std::string, Accum> summary;

    auto emit = [&](size_t i, size_t j, const std::string& method, double estimate,
                    bool defined, double raw, double exact, bool have_exact) {
        out << i << "," << j << "," << method << ","
            << (defined ? estimate : std::nan("")) << "," << (defined ? 1 : 0)
            << "," << raw << "\n";
        auto& acc = summary[method];
        if (!defined) {
            ++acc.undefined;
        } else if (have_exact) {
            acc.se_sum += (estimate - exact) * (estimate - exact);
            ++acc.count;
        }
    };

    for (auto [i, j] : pair_list) {
        if (i >= n || j >= n) throw param_error("pair index out of range");
        double exact = 0.0;
        bool have_exact = !sets.empty();
        if (have_exact) exact = jaccard_exact(sets[i], sets[j]);
        if (have_exact && need("exact"))
            emit(i, j, "exact", exact, true, exact, exact, true);
        if (!corpus.bits.empty()) {
            const BitSketch& y = corpus.bits[i];
            const BitSketch& z = corpus.bits[j];
            if (need("sim_sh")) {
                SimilarityEstimate e = sim_sh(y, z);
                emit(i, j, "sim_sh", e.value, e.defined, e.raw, exact, have_exact);
            }
            if (need("hamming")) {
                double d = normalized_hamming(y, z);
                emit(i, j, "hamming", d, true, d, exact, false);
            }
            if (need("hamming_inverted")) {
                uint64_t k1 = corpus.item_k[i], k2 = corpus.item_k[j];
                if (k1 == 0 && !sets.empty()) k1 = sets[i].k();
                if (k2 == 0 && !sets.empty()) k2 = sets[j].k();
                if (k1 > 0 && k2 > 0) {
                    SimilarityEstimate e =
                        invert_hamming(normalized_hamming(y, z), k1, k2,
                                       corpus.header.gamma);
                    emit(i, j, "hamming_inverted", e.value, true, e.raw, exact,
                         have_exact);
                }
            }
        }
        if (!mh_classic.empty()) {
            SimilarityEstimate e = estimate_minhash(mh_classic[i], mh_classic[j]);
            emit(i, j, "minhash", e.value, true, e.raw, exact, have_exact);
        }
        if (!mh_bits.empty()) {
            SimilarityEstimate e = estimate_minhash_1bit(mh_bits[i], mh_bits[j]);
            emit(i, j, "minhash_1bit", e.value, true, e.raw, exact, have_exact);
        }
        if (!mh_bottom.empty()) {
            SimilarityEstimate e = estimate_bottom_m(mh_bottom[i], mh_bottom[j]);
            emit(i, j, "bottom_m", e.value, e.defined, e.raw, exact, have_exact);
        }
    }

    json js;
    for (const auto& [method, acc] : summary) {
        json entry;
        entry["undefined"] = acc.undefined;
        if (acc.count > 0) entry["mse"] = acc.se_sum / double(acc.count);
        js[method] = entry;
    }
    if (!a.summary_path.empty()) {
        auto sf = open_text_out(a.summary_path);
        sf << js.dump(2) << "\n";
    } else if (!js.empty()) {
        std::cerr << js.dump(2) << "\n";
    }
    return kExitOk;
}

// --------------------------------------------------------------- eval-pr ---

struct EvalPrArgs {
    size_t synthetic = 0;
    std::string in, format = "idset";
    unsigned kappa = 21;
    bool canonical = false;
    size_t k = 230;
    std::string m_grid = "16,32,48,64,96,128,192,256";
    std::string thresholds = "0.5,0.6";
    int repeats = 10;
    uint64_t seed = 1;
    GammaChoice gamma;
    unsigned threads = 0;
    std::string out = "-";
};

int cmd_eval_pr(const EvalPrArgs& a) {
    std::vector<SparseSet> corpus;
    if (a.synthetic > 0)
        corpus = make_eval_corpus(a.synthetic, a.k, derive_seed(a.seed, 999));
    else if (!a.in.empty())
        corpus = read_sets(a.in, a.format, a.kappa, a.canonical, true);
    else
        throw param_error("eval-pr: pass --synthetic N or --in FILE");

    PrConfig config;
    config.m_grid = parse_u64_list(a.m_grid);
    config.thresholds = parse_double_list(a.thresholds);
    config.repeats = a.repeats;
    config.seed = a.seed;
    config.threads = a.threads;
    if (a.gamma.gamma > 0.0 || a.gamma.k_for_gamma > 0)
        config.gamma = a.gamma.resolve(corpus);

    auto rows = eval_pr(corpus, config);

    std::ostream* outp = &std::cout;
    std::ofstream out_file;
    if (a.out != "-") {
        out_file = open_text_out(a.out);
        outp = &out_file;
    }
    std::ostream& out = *outp;
    out << "m,threshold,method,repeat,precision,recall,tp,retrieved,positives,"
           "warning\n";
    out.precision(10);
    for (const auto& r : rows) {
        out << r.m << "," << r.threshold << "," << sim_method_name(r.method) << ",";
        if (r.repeat < 0)
            out << "mean";
        else
            out << r.repeat;
        out << "," << r.precision << "," << r.recall << "," << r.tp << ","
            << r.retrieved << "," << r.positives << ","
            << (r.empty_positive_class ? "empty_positive_class" : "") << "\n";
    }
    return kExitOk;
}

// ----------------------------------------------------------------- bench ---

struct BenchArgs {
    std::string k_grid = "10000";
    std::string m_grid = "10000,100000,1000000";
    double gamma = 1e-3;
    uint64_t seed = 1;
    int reps = 3;
    std::string out = "-";
};

int cmd_bench(const BenchArgs& a) {
    std::ostream* outp = &std::cout;
    std::ofstream out_file;
    if (a.out != "-") {
        out_file = open_text_out(a.out);
        outp = &out_file;
    }
    std::ostream& out = *outp;
    out << "k,m,mode,setup_sec,sketch_sec,hashes,comparisons,sketch_bytes,"
           "minhash_bytes\n";
    out.precision(6);
    for (uint64_t k : parse_u64_list(a.k_grid)) {
        for (uint64_t m : parse_u64_list(a.m_grid)) {
            for (auto mode : {SketchMode::windows, SketchMode::threshold}) {
                BenchCell cell = bench_cell(k, m, mode, a.gamma, a.seed, a.reps);
                out << k << "," << m << ","
                    << (mode == SketchMode::windows ? "windows" : "threshold")
                    << "," << cell.setup_sec << "," << cell.sketch_sec << ","
                    << cell.hashes << "," << cell.comparisons << ","
                    << cell.sketch_bytes << "," << cell.minhash_bytes << "\n";
                out.flush();
            }
        }
    }
    return kExitOk;
}

// ------------------------------------------------------------------ fig2 ---

struct Fig2Args {
    size_t k = 230;
    uint64_t m = 50;
    size_t runs = 500;
    std::string j_grid = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
    uint64_t seed = 1;
    unsigned threads = 0;
    std::string out = "-";
};

int cmd_fig2(const Fig2Args& a) {
    auto rows = hamming_validation(a.k, a.m, a.runs, parse_double_list(a.j_grid),
                                   a.seed, a.threads);
    std::ostream* outp = &std::cout;
    std::ofstream out_file;
    if (a.out != "-") {
        out_file = open_text_out(a.out);
        outp = &out_file;
    }
    std::ostream& out = *outp;
    out << "j_target,j_achieved,emp_mean,emp_var,e_sh,v_hat\n";
    out.precision(10);
    for (const auto& r : rows)
        out << r.j_target << "," << r.j_achieved << "," << r.emp_mean << ","
            << r.emp_var << "," << r.e_sh << "," << r.v_hat << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------ plan ---

struct PlanArgs {
    uint64_t n = 0;
    double p1 = 0.0, p2 = 0.0;
    double j1 = -1.0, j2 = -1.0;
    std::string out = "-";
};

int cmd_plan(const PlanArgs& a) {
    double p1 = a.p1, p2 = a.p2;
    if (a.j1 >= 0.0) p1 = collision_prob_sparsehash(a.j1);
    if (a.j2 >= 0.0) p2 = collision_prob_sparsehash(a.j2);
    LshPlan pl = plan(a.n, p1, p2);
    json js = {{"n", a.n}, {"p1", pl.p1},   {"p2", pl.p2}, {"m", pl.m},
               {"L", pl.L}, {"rho", pl.rho}, {"r1", pl.r1}, {"r2", pl.r2}};
    if (a.out == "-") {
        std::cout << js.dump(2) << "\n";
    } else {
        auto f = open_text_out(a.out);
        f << js.dump(2) << "\n";
    }
    return kExitOk;
}

// ----------------------------------------------------------- prop1-check ---

struct Prop1Args {
    double step = 1e-3;
    uint64_t m = 16;
    std::string out;
};

int cmd_prop1(const Prop1Args& a) {
    std::vector<double> grid;
    size_t steps = static_cast<size_t>(std::llround(1.0 / a.step));
    for (size_t i = 0; i <= steps; ++i)
        grid.push_back(static_cast<double>(i) / static_cast<double>(steps));
    Prop1Report rep = prop1_check(grid, a.m);
    if (!a.out.empty()) {
        auto f = open_text_out(a.out);
        f << "j,p_sh,p_mh,margin\n";
        f.precision(17);
        for (double j : grid)
            f << j << "," << collision_prob_sparsehash(j) << ","
              << collision_prob_minhash1bit(j) << ","
              << collision_prob_sparsehash(j) - collision_prob_minhash1bit(j)
              << "\n";
    }
    std::cout << "points=" << rep.n_points
              << " min_interior_margin=" << rep.min_interior_margin
              << " max_boundary_deviation=" << rep.max_boundary_deviation
              << " max_table_ratio=" << rep.max_table_ratio
              << " holds=" << (rep.holds ? "yes" : "no") << "\n";
    return rep.holds ? kExitOk : 1;
}

// ------------------------------------------------------------- lsh-build ---

struct LshBuildArgs {
    std::string in, format = "idset";
    unsigned kappa = 21;
    bool canonical = false;
    double p1 = 0.0, p2 = 0.0;
    double j1 = -1.0, j2 = -1.0;
    GammaChoice gamma;
    std::string mode = "threshold";
    uint64_t seed = 1;
    std::string out = "index.sphi";
};

int cmd_lsh_build(const LshBuildArgs& a) {
    auto sets = read_sets(a.in, a.format, a.kappa, a.canonical, true);
    if (sets.size() < 2) throw param_error("lsh-build: need at least 2 items");
    double p1 = a.p1, p2 = a.p2;
    if (a.j1 >= 0.0) p1 = collision_prob_sparsehash(a.j1);
    if (a.j2 >= 0.0) p2 = collision_prob_sparsehash(a.j2);
    LshPlan pl = plan(sets.size(), p1, p2);
    double gamma = a.gamma.resolve(sets);
    SketchMode mode =
        a.mode == "windows" ? SketchMode::windows : SketchMode::threshold;
    LshIndex index = build_index_from_sets(pl, gamma, HashSeed{a.seed}, mode,
                                           mix64(a.seed ^ kGoldenStride), sets);
    save_index_file(a.out, index);
    json js = {{"items", index.size()}, {"m", pl.m},   {"L", pl.L},
               {"rho", pl.rho},         {"p1", pl.p1}, {"p2", pl.p2},
               {"gamma", gamma},        {"out", a.out}};
    std::cout << js.dump(2) << "\n";
    return kExitOk;
}

// ------------------------------------------------------------- lsh-query ---

struct LshQueryArgs {
    std::string index_path;
    std::string in, format = "idset";
    unsigned kappa = 21;
    bool canonical = false;
    bool cr_filter = false;
    std::string out = "-";
};

int cmd_lsh_query(const LshQueryArgs& a) {
    LshIndex index = load_index_file(a.index_path);
    auto queries = read_sets(a.in, a.format, a.kappa, a.canonical, true);
    std::ostream* outp = &std::cout;
    std::ofstream out_file;
    if (a.out != "-") {
        out_file = open_text_out(a.out);
        outp = &out_file;
    }
    std::ostream& out = *outp;
    out << "query,candidate,hamming,normalized,estimate,within_cr\n";
    out.precision(10);
    for (size_t q = 0; q < queries.size(); ++q) {
        auto cands = query_index_set(index, queries[q]);
        for (const auto& c : cands) {
            bool within = c.normalized <= index.lsh_plan.r2;
            if (a.cr_filter && !within) continue;
            double est = std::nan("");
            if (index.item_support[c.id] > 0)
                est = invert_hamming(c.normalized, queries[q].k(),
                                     index.item_support[c.id], index.gamma)
                          .value;
            out << q << "," << c.id << "," << c.distance << "," << c.normalized
                << "," << est << "," << (within ? 1 : 0) << "\n";
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SparseHash set-similarity sketching toolkit"};
    app.require_subcommand(1);

    SketchArgs sk;
    auto* c_sketch = app.add_subcommand("sketch", "sketch a corpus to files");
    c_sketch->add_option("--in", sk.in, "input path")->required();
    c_sketch->add_option("--format", sk.format, "docword|fasta|idset");
    c_sketch->add_option("--mode", sk.mode, "threshold|windows");
    c_sketch->add_option("--m", sk.m, "measurements per sketch");
    add_gamma_flags(c_sketch, sk.gamma);
    c_sketch->add_option("--seed", sk.seed, "hash seed");
    c_sketch->add_option("--kappa", sk.kappa, "kmer length for fasta");
    c_sketch->add_flag("--canonical", sk.canonical, "canonical kmers");
    c_sketch->add_flag("--per-record", sk.per_record, "one set per fasta record");
    c_sketch->add_option("--threads", sk.threads, "worker threads (0 = auto)");
    c_sketch->add_option("--out", sk.out_dir, "output directory")->required();

    CompareArgs cmp;
    auto* c_cmp = app.add_subcommand("compare", "pairwise similarity estimates");
    c_cmp->add_option("--sketch-dir", cmp.sketch_dir, "directory from `sketch`");
    c_cmp->add_option("--sets", cmp.sets_path, "raw sets for exact J / baselines");
    c_cmp->add_option("--format", cmp.format, "docword|fasta|idset");
    c_cmp->add_option("--kappa", cmp.kappa, "kmer length for fasta");
    c_cmp->add_flag("--canonical", cmp.canonical, "canonical kmers");
    c_cmp->add_flag("--per-record", cmp.per_record, "one set per fasta record");
    c_cmp->add_option("--methods", cmp.methods,
                      "comma list: exact,sim_sh,hamming,hamming_inverted,"
                      "minhash,minhash_1bit,bottom_m");
    c_cmp->add_option("--pairs", cmp.pairs, "explicit i:j pair list");
    c_cmp->add_option("--mh-m", cmp.mh_m, "m for minhash baselines");
    c_cmp->add_option("--threads", cmp.threads, "worker threads (0 = auto)");
    c_cmp->add_option("--out", cmp.out, "CSV path or - for stdout");
    c_cmp->add_option("--summary", cmp.summary_path, "summary JSON path");

    EvalPrArgs pr;
    auto* c_pr = app.add_subcommand("eval-pr", "precision/recall harness");
    c_pr->add_option("--synthetic", pr.synthetic, "synthetic corpus size");
    c_pr->add_option("--in", pr.in, "input corpus path");
    c_pr->add_option("--format", pr.format, "docword|fasta|idset");
    c_pr->add_option("--kappa", pr.kappa, "kmer length for fasta");
    c_pr->add_flag("--canonical", pr.canonical, "canonical kmers");
    c_pr->add_option("--k", pr.k, "cardinality for synthetic items");
    c_pr->add_option("--m-grid", pr.m_grid, "comma list of m values");
    c_pr->add_option("--thresholds", pr.thresholds, "comma list of J thresholds");
    c_pr->add_option("--repeats", pr.repeats, "seeded repeats");
    c_pr->add_option("--seed", pr.seed, "base seed; run r uses seed+r");
    add_gamma_flags(c_pr, pr.gamma);
    c_pr->add_option("--threads", pr.threads, "worker threads (0 = auto)");
    c_pr->add_option("--out", pr.out, "CSV path or - for stdout");

    BenchArgs bn;
    auto* c_bn = app.add_subcommand("bench", "runtime table for both sketchers");
    c_bn->add_option("--k-grid", bn.k_grid, "comma list of support sizes");
    c_bn->add_option("--m-grid", bn.m_grid, "comma list of m values");
    c_bn->add_option("--gamma", bn.gamma, "sparsification probability");
    c_bn->add_option("--seed", bn.seed, "seed");
    c_bn->add_option("--reps", bn.reps, "repetitions, best-of");
    c_bn->add_option("--out", bn.out, "CSV path or - for stdout");

    Fig2Args f2;
    auto* c_f2 = app.add_subcommand("fig2", "Hamming mean/variance validation");
    c_f2->add_option("--k", f2.k, "support size");
    c_f2->add_option("--m", f2.m, "measurements");
    c_f2->add_option("--runs", f2.runs, "runs per J");
    c_f2->add_option("--j-grid", f2.j_grid, "comma list of J targets");
    c_f2->add_option("--seed", f2.seed, "base seed; run r uses seed+r");
    c_f2->add_option("--threads", f2.threads, "worker threads (0 = auto)");
    c_f2->add_option("--out", f2.out, "CSV path or - for stdout");

    PlanArgs pa;
    auto* c_pa = app.add_subcommand("plan", "derive (m, L, rho) LSH parameters");
    c_pa->add_option("--n", pa.n, "corpus size")->required();
    c_pa->add_option("--p1", pa.p1, "near collision probability");
    c_pa->add_option("--p2", pa.p2, "far collision probability");
    c_pa->add_option("--j1", pa.j1, "near Jaccard (converted via p_sh)");
    c_pa->add_option("--j2", pa.j2, "far Jaccard (converted via p_sh)");
    c_pa->add_option("--out", pa.out, "JSON path or - for stdout");

    Prop1Args p1;
    auto* c_p1 = app.add_subcommand("prop1-check",
                                    "verify (J+1)/2 <= 2^((J-1)/(1+J)) on a grid");
    c_p1->add_option("--step", p1.step, "grid step");
    c_p1->add_option("--m", p1.m, "band bits for the table-count ratio");
    c_p1->add_option("--out", p1.out, "optional CSV path");

    LshBuildArgs lb;
    auto* c_lb = app.add_subcommand("lsh-build", "build a banded LSH index");
    c_lb->add_option("--in", lb.in, "input corpus")->required();
    c_lb->add_option("--format", lb.format, "docword|fasta|idset");
    c_lb->add_option("--kappa", lb.kappa, "kmer length for fasta");
    c_lb->add_flag("--canonical", lb.canonical, "canonical kmers");
    c_lb->add_option("--p1", lb.p1, "near collision probability");
    c_lb->add_option("--p2", lb.p2, "far collision probability");
    c_lb->add_option("--j1", lb.j1, "near Jaccard (converted via p_sh)");
    c_lb->add_option("--j2", lb.j2, "far Jaccard (converted via p_sh)");
    add_gamma_flags(c_lb, lb.gamma);
    c_lb->add_option("--mode", lb.mode, "threshold|windows");
    c_lb->add_option("--seed", lb.seed, "hash seed");
    c_lb->add_option("--out", lb.out, "index file path");

    LshQueryArgs lq;
    auto* c_lq = app.add_subcommand("lsh-query", "query a banded LSH index");
    c_lq->add_option("--index", lq.index_path, "index file")->required();
    c_lq->add_option("--in", lq.in, "query sets")->required();
    c_lq->add_option("--format", lq.format, "docword|fasta|idset");
    c_lq->add_option("--kappa", lq.kappa, "kmer length for fasta");
    c_lq->add_flag("--canonical", lq.canonical, "canonical kmers");
    c_lq->add_flag("--cr-filter", lq.cr_filter, "drop candidates beyond cR");
    c_lq->add_option("--out", lq.out, "CSV path or - for stdout");

    try {
        app.parse(argc, argv);
        if (*c_sketch) return cmd_sketch(sk);
        if (*c_cmp) return cmd_compare(cmp);
        if (*c_pr) return cmd_eval_pr(pr);
        if (*c_bn) return cmd_bench(bn);
        if (*c_f2) return cmd_fig2(f2);
        if (*c_pa) return cmd_plan(pa);
        if (*c_p1) return cmd_prop1(p1);
        if (*c_lb) return cmd_lsh_build(lb);
        if (*c_lq) return cmd_lsh_query(lq);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParam;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const incomparable_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIncomparable;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParam;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParam;
    }
    return kExitOk;
}
