#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sphash/sparse_set.hpp"

namespace sphash {

struct DocwordCorpus {
    std::vector<SparseSet> docs;
    uint64_t vocab_size = 0; // W from the header
    CorpusStats stats;
};

// UCI docword format: three header lines D, W, NNZ, then "docID wordID count"
// with 1-based ids. Counts are discarded; each document becomes the set of
// its distinct wordIDs. Throws parse_error with line numbers.
DocwordCorpus parse_docword(std::istream& in);

// Inverse of parse_docword (counts written as 1).
void write_docword(std::ostream& out, std::span<const SparseSet> docs,
                   uint64_t vocab_size);

// Every stride-1 window of length kappa over the sequence (headers skipped,
// sequence lines concatenated, case-insensitive) whose characters are all
// ACGT is 2-bit packed most-significant-first and mix64-hashed into an id.
// Windows containing other characters are skipped. With canonical set, the
// lexicographically smaller of window and reverse complement is encoded.
// kappa must be in [1, 32].
SparseSet fasta_kmers(std::istream& in, unsigned kappa, bool canonical);

// One SparseSet per '>' record instead of one for the whole stream.
std::vector<SparseSet> fasta_kmers_per_record(std::istream& in, unsigned kappa,
                                              bool canonical);

// Newline-delimited sets: each nonempty line is whitespace-separated u64 ids.
std::vector<SparseSet> parse_idset(std::istream& in);

} // namespace sphash
