#include "sphash/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "sphash/error.hpp"

namespace sphash {

namespace {

void put_bytes(std::ostream& out, const void* p, size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void put_u8(std::ostream& out, uint8_t v) { put_bytes(out, &v, 1); }

void put_u16(std::ostream& out, uint16_t v) {
    uint8_t b[2] = {uint8_t(v & 0xff), uint8_t(v >> 8)};
    put_bytes(out, b, 2);
}

void put_u32(std::ostream& out, uint32_t v) {
    uint8_t b[4];
    for (int i = 0; i < 4; ++i) b[i] = uint8_t(v >> (8 * i));
    put_bytes(out, b, 4);
}

void put_u64(std::ostream& out, uint64_t v) {
    uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = uint8_t(v >> (8 * i));
    put_bytes(out, b, 8);
}

void put_f64(std::ostream& out, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

void get_bytes(std::istream& in, void* p, size_t n, const char* what) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in.gcount()) != n)
        throw parse_error(std::string("sketch io: truncated stream reading ") + what);
}

uint8_t get_u8(std::istream& in, const char* what) {
    uint8_t v;
    get_bytes(in, &v, 1, what);
    return v;
}

uint16_t get_u16(std::istream& in, const char* what) {
    uint8_t b[2];
    get_bytes(in, b, 2, what);
    return uint16_t(b[0]) | uint16_t(b[1]) << 8;
}

uint32_t get_u32(std::istream& in, const char* what) {
    uint8_t b[4];
    get_bytes(in, b, 4, what);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(b[i]) << (8 * i);
    return v;
}

uint64_t get_u64(std::istream& in, const char* what) {
    uint8_t b[8];
    get_bytes(in, b, 8, what);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& in, const char* what) {
    uint64_t bits = get_u64(in, what);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

void expect_magic(std::istream& in, const char* magic) {
    char got[4];
    get_bytes(in, got, 4, "magic");
    if (std::memcmp(got, magic, 4) != 0)
        throw parse_error(std::string("sketch io: bad magic, expected ") + magic);
}

// Bit payload: ceil(m/8) bytes, bit i at byte i>>3 position i&7. This is the
// little-endian byte image of the word array.
void put_bit_payload(std::ostream& out, const std::vector<uint64_t>& words,
                     uint64_t m) {
    uint64_t n_bytes = (m + 7) / 8;
    std::vector<uint8_t> bytes(n_bytes);
    for (uint64_t i = 0; i < n_bytes; ++i)
        bytes[i] = uint8_t(words[i >> 3] >> (8 * (i & 7)));
    put_bytes(out, bytes.data(), bytes.size());
}

std::vector<uint64_t> get_bit_payload(std::istream& in, uint64_t m) {
    uint64_t n_bytes = (m + 7) / 8;
    std::vector<uint8_t> bytes(n_bytes);
    get_bytes(in, bytes.data(), n_bytes, "bit payload");
    std::vector<uint64_t> words((m + 63) / 64, 0);
    for (uint64_t i = 0; i < n_bytes; ++i)
        words[i >> 3] |= uint64_t(bytes[i]) << (8 * (i & 7));
    if (m % 8 != 0) {
        uint8_t pad_mask = uint8_t(0xff << (m % 8));
        if (bytes[n_bytes - 1] & pad_mask)
            throw parse_error("sketch io: nonzero padding bits past m");
    }
    return words;
}

void put_sketch_header(std::ostream& out, const SketchFileHeader& h) {
    put_bytes(out, "SPHS", 4);
    put_u16(out, h.version);
    put_u8(out, h.mode);
    put_u8(out, h.b);
    put_u64(out, h.m);
    put_f64(out, h.gamma);
    put_u64(out, h.seed);
    put_u64(out, h.fingerprint);
}

SketchFileHeader get_sketch_header(std::istream& in) {
    expect_magic(in, "SPHS");
    SketchFileHeader h;
    h.version = get_u16(in, "version");
    if (h.version != kSketchFormatVersion)
        throw parse_error("sketch io: unsupported version " + std::to_string(h.version));
    h.mode = get_u8(in, "mode");
    h.b = get_u8(in, "b");
    h.m = get_u64(in, "m");
    h.gamma = get_f64(in, "gamma");
    h.seed = get_u64(in, "seed");
    h.fingerprint = get_u64(in, "fingerprint");
    return h;
}

} // namespace

void save_sketch(std::ostream& out, const BitSketch& sketch,
                 const SketchParams& params) {
    SketchFileHeader h;
    h.mode = uint8_t(params.mode);
    h.b = params.b;
    h.m = sketch.m;
    h.gamma = params.gamma;
    h.seed = params.seed.base;
    h.fingerprint = sketch.fingerprint;
    put_sketch_header(out, h);
    put_bit_payload(out, sketch.words, sketch.m);
}

void save_sketch(std::ostream& out, const MinHashSketch& sketch, HashSeed seed) {
    SketchFileHeader h;
    h.mode = uint8_t(sketch.variant);
    h.b = 64;
    h.m = sketch.m;
    h.gamma = 0.0;
    h.seed = seed.base;
    h.fingerprint = sketch.fingerprint;
    put_sketch_header(out, h);
    switch (sketch.variant) {
        case MinHashVariant::classic:
            for (uint64_t v : sketch.values) put_u64(out, v);
            break;
        case MinHashVariant::one_bit:
            put_bit_payload(out, sketch.words, sketch.m);
            break;
        case MinHashVariant::bottom_m:
            put_u64(out, sketch.values.size());
            for (uint64_t v : sketch.values) put_u64(out, v);
            break;
    }
}

LoadedSketch load_sketch(std::istream& in) {
    LoadedSketch ls;
    ls.header = get_sketch_header(in);
    const auto& h = ls.header;
    switch (h.mode) {
        case 0:
        case 1:
            ls.is_bits = true;
            ls.bits.m = h.m;
            ls.bits.fingerprint = h.fingerprint;
            ls.bits.words = get_bit_payload(in, h.m);
            break;
        case 2: {
            ls.minhash.variant = MinHashVariant::classic;
            ls.minhash.m = h.m;
            ls.minhash.fingerprint = h.fingerprint;
            ls.minhash.values.resize(h.m);
            for (auto& v : ls.minhash.values) v = get_u64(in, "minima");
            break;
        }
        case 3:
            ls.minhash.variant = MinHashVariant::one_bit;
            ls.minhash.m = h.m;
            ls.minhash.fingerprint = h.fingerprint;
            ls.minhash.words = get_bit_payload(in, h.m);
            break;
        case 4: {
            ls.minhash.variant = MinHashVariant::bottom_m;
            ls.minhash.m = h.m;
            ls.minhash.fingerprint = h.fingerprint;
            uint64_t n = get_u64(in, "bottom count");
            if (n > h.m) throw parse_error("sketch io: bottom sketch larger than m");
            ls.minhash.values.resize(n);
            uint64_t prev = 0;
            for (size_t i = 0; i < n; ++i) {
                ls.minhash.values[i] = get_u64(in, "bottom value");
                if (i > 0 && ls.minhash.values[i] <= prev)
                    throw parse_error("sketch io: bottom values not strictly increasing");
                prev = ls.minhash.values[i];
            }
            break;
        }
        default:
            throw parse_error("sketch io: unknown mode byte " + std::to_string(h.mode));
    }
    return ls;
}

void save_windows(std::ostream& out, const WindowSet& w) {
    put_bytes(out, "SPHW", 4);
    put_u16(out, kSketchFormatVersion);
    put_u64(out, w.bottoms.size());
    put_u64(out, w.tau);
    put_u64(out, w.seed);
    for (uint64_t b : w.bottoms) put_u64(out, b);
}

WindowSet load_windows(std::istream& in) {
    expect_magic(in, "SPHW");
    uint16_t version = get_u16(in, "version");
    if (version != kSketchFormatVersion)
        throw parse_error("window io: unsupported version " + std::to_string(version));
    WindowSet w;
    uint64_t m = get_u64(in, "m");
    w.tau = get_u64(in, "tau");
    w.seed = get_u64(in, "window seed");
    w.bottoms.resize(m);
    for (auto& b : w.bottoms) b = get_u64(in, "bottom");
    for (size_t i = 1; i < w.bottoms.size(); ++i)
        if (w.bottoms[i] < w.bottoms[i - 1])
            throw parse_error("window io: bottoms not sorted");
    return w;
}

void save_index(std::ostream& out, const LshIndex& index) {
    put_bytes(out, "SPHI", 4);
    put_u16(out, kSketchFormatVersion);
    put_u64(out, index.lsh_plan.m);
    put_u64(out, index.lsh_plan.L);
    put_f64(out, index.lsh_plan.rho);
    put_f64(out, index.lsh_plan.p1);
    put_f64(out, index.lsh_plan.p2);
    put_f64(out, index.lsh_plan.r1);
    put_f64(out, index.lsh_plan.r2);
    put_u8(out, uint8_t(index.mode));
    put_u8(out, index.from_sets ? 1 : 0);
    put_f64(out, index.gamma);
    put_u64(out, index.seed_base);
    put_u64(out, index.window_seed_base);
    put_u64(out, index.sketch_fingerprint);
    put_u64(out, index.items.size());
    uint64_t item_bits = index.items.empty() ? 0 : index.items[0].m;
    put_u64(out, item_bits);
    for (size_t i = 0; i < index.items.size(); ++i) {
        put_u64(out, index.item_support[i]);
        put_bit_payload(out, index.items[i].words, index.items[i].m);
    }
    for (const auto& table : index.tables) {
        put_u64(out, table.size());
        std::vector<uint64_t> keys;
        keys.reserve(table.size());
        for (const auto& kv : table) keys.push_back(kv.first);
        std::sort(keys.begin(), keys.end());
        for (uint64_t key : keys) {
            const auto& bucket = table.at(key);
            put_u64(out, key);
            put_u64(out, bucket.size());
            for (uint32_t id : bucket) put_u32(out, id);
        }
    }
}

LshIndex load_index(std::istream& in) {
    expect_magic(in, "SPHI");
    uint16_t version = get_u16(in, "version");
    if (version != kSketchFormatVersion)
        throw parse_error("index io: unsupported version " + std::to_string(version));
    LshIndex index;
    index.lsh_plan.m = get_u64(in, "plan m");
    index.lsh_plan.L = get_u64(in, "plan L");
    index.lsh_plan.rho = get_f64(in, "plan rho");
    index.lsh_plan.p1 = get_f64(in, "plan p1");
    index.lsh_plan.p2 = get_f64(in, "plan p2");
    index.lsh_plan.r1 = get_f64(in, "plan r1");
    index.lsh_plan.r2 = get_f64(in, "plan r2");
    index.mode = SketchMode(get_u8(in, "mode"));
    index.from_sets = get_u8(in, "from_sets") != 0;
    index.gamma = get_f64(in, "gamma");
    index.seed_base = get_u64(in, "seed base");
    index.window_seed_base = get_u64(in, "window seed base");
    index.sketch_fingerprint = get_u64(in, "fingerprint");
    uint64_t n_items = get_u64(in, "item count");
    uint64_t item_bits = get_u64(in, "item bits");
    index.items.reserve(n_items);
    index.item_support.resize(n_items);
    for (uint64_t i = 0; i < n_items; ++i) {
        index.item_support[i] = get_u64(in, "item support");
        BitSketch s;
        s.m = item_bits;
        s.fingerprint = index.sketch_fingerprint;
        s.words = get_bit_payload(in, item_bits);
        index.items.push_back(std::move(s));
    }
    index.tables.resize(index.lsh_plan.L);
    for (auto& table : index.tables) {
        uint64_t n_buckets = get_u64(in, "bucket count");
        table.reserve(n_buckets);
        for (uint64_t bkt = 0; bkt < n_buckets; ++bkt) {
            uint64_t key = get_u64(in, "bucket key");
            uint64_t count = get_u64(in, "bucket size");
            auto& ids = table[key];
            ids.resize(count);
            for (auto& id : ids) {
                id = get_u32(in, "bucket id");
                if (id >= n_items) throw parse_error("index io: item id out of range");
            }
        }
    }
    return index;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw parse_error("cannot open for writing: " + path);
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw parse_error("cannot open for reading: " + path);
    return f;
}

} // namespace

void save_sketch_file(const std::string& path, const BitSketch& sketch,
                      const SketchParams& params) {
    auto f = open_out(path);
    save_sketch(f, sketch, params);
}

void save_sketch_file(const std::string& path, const MinHashSketch& sketch,
                      HashSeed seed) {
    auto f = open_out(path);
    save_sketch(f, sketch, seed);
}

LoadedSketch load_sketch_file(const std::string& path) {
    auto f = open_in(path);
    return load_sketch(f);
}

void save_windows_file(const std::string& path, const WindowSet& w) {
    auto f = open_out(path);
    save_windows(f, w);
}

WindowSet load_windows_file(const std::string& path) {
    auto f = open_in(path);
    return load_windows(f);
}

void save_index_file(const std::string& path, const LshIndex& index) {
    auto f = open_out(path);
    save_index(f, index);
}

LshIndex load_index_file(const std::string& path) {
    auto f = open_in(path);
    return load_index(f);
}

} // namespace sphash
