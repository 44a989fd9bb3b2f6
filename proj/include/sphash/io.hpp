#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "sphash/lsh.hpp"
#include "sphash/minhash.hpp"
#include "sphash/sketch.hpp"

namespace sphash {

// Sketch container ("SPHS"): magic, version u16, mode u8 (0 threshold,
// 1 windows, 2 classic minhash, 3 one-bit minhash, 4 bottom-m), b u8, m u64,
// gamma f64, seed u64, fingerprint u64, then a mode-specific payload. Bit
// payloads store bit i at byte i>>3, position i&7; all integers little-endian.
inline constexpr uint16_t kSketchFormatVersion = 1;

struct SketchFileHeader {
    uint16_t version = kSketchFormatVersion;
    uint8_t mode = 0;
    uint8_t b = 64;
    uint64_t m = 0;
    double gamma = 0.0;
    uint64_t seed = 0;
    uint64_t fingerprint = 0;
};

void save_sketch(std::ostream& out, const BitSketch& sketch,
                 const SketchParams& params);
void save_sketch(std::ostream& out, const MinHashSketch& sketch, HashSeed seed);

struct LoadedSketch {
    SketchFileHeader header;
    bool is_bits = false; // mode 0/1 -> bits, 2/3/4 -> minhash
    BitSketch bits;
    MinHashSketch minhash;
};

LoadedSketch load_sketch(std::istream& in);

// Window container ("SPHW"): magic, version u16, m u64, tau u64,
// window-rng-seed u64, then m bottoms as u64 little-endian.
void save_windows(std::ostream& out, const WindowSet& w);
WindowSet load_windows(std::istream& in);

// Index container ("SPHI"): versioned header with the plan and sketching
// config, the item sketches, then per-table bucket maps, length-prefixed,
// buckets sorted by key.
void save_index(std::ostream& out, const LshIndex& index);
LshIndex load_index(std::istream& in);

// File wrappers; throw parse_error on open failure.
void save_sketch_file(const std::string& path, const BitSketch& sketch,
                      const SketchParams& params);
void save_sketch_file(const std::string& path, const MinHashSketch& sketch,
                      HashSeed seed);
LoadedSketch load_sketch_file(const std::string& path);
void save_windows_file(const std::string& path, const WindowSet& w);
WindowSet load_windows_file(const std::string& path);
void save_index_file(const std::string& path, const LshIndex& index);
LshIndex load_index_file(const std::string& path);

} // namespace sphash
