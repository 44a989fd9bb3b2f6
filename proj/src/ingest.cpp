#include "sphash/ingest.hpp"

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "sphash/error.hpp"
#include "sphash/hash.hpp"

namespace sphash {

namespace {

uint64_t parse_header_count(std::istream& in, size_t& line_no, const char* what) {
    std::string line;
    if (!std::getline(in, line))
        throw parse_error(std::string("docword: missing header line for ") + what);
    ++line_no;
    std::istringstream ls(line);
    uint64_t v = 0;
    if (!(ls >> v))
        throw parse_error(std::string("docword: malformed header at line ") +
                          std::to_string(line_no) + " (expected " + what + ")");
    return v;
}

} // namespace

DocwordCorpus parse_docword(std::istream& in) {
    size_t line_no = 0;
    uint64_t n_docs = parse_header_count(in, line_no, "D");
    uint64_t vocab = parse_header_count(in, line_no, "W");
    uint64_t nnz = parse_header_count(in, line_no, "NNZ");

    std::vector<std::vector<uint64_t>> words(n_docs);
    std::string line;
    uint64_t seen = 0;
    while (seen < nnz) {
        if (!std::getline(in, line))
            throw parse_error("docword: unexpected end of stream at line " +
                              std::to_string(line_no + 1) + " (read " +
                              std::to_string(seen) + " of " + std::to_string(nnz) +
                              " entries)");
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        uint64_t doc = 0, word = 0, count = 0;
        if (!(ls >> doc >> word >> count))
            throw parse_error("docword: malformed entry at line " +
                              std::to_string(line_no));
        if (doc < 1 || doc > n_docs)
            throw parse_error("docword: docID " + std::to_string(doc) +
                              " out of range [1," + std::to_string(n_docs) +
                              "] at line " + std::to_string(line_no));
        if (word < 1 || word > vocab)
            throw parse_error("docword: wordID " + std::to_string(word) +
                              " out of range [1," + std::to_string(vocab) +
                              "] at line " + std::to_string(line_no));
        words[doc - 1].push_back(word);
        ++seen;
    }

    DocwordCorpus out;
    out.vocab_size = vocab;
    out.docs.reserve(n_docs);
    for (auto& w : words) out.docs.push_back(SparseSet::from_unsorted(std::move(w)));
    out.stats = corpus_stats(out.docs);
    return out;
}

void write_docword(std::ostream& out, std::span<const SparseSet> docs,
                   uint64_t vocab_size) {
    uint64_t nnz = 0;
    for (const auto& d : docs) nnz += d.k();
    out << docs.size() << "\n" << vocab_size << "\n" << nnz << "\n";
    for (size_t i = 0; i < docs.size(); ++i)
        for (uint64_t w : docs[i].elements) out << (i + 1) << " " << w << " 1\n";
}

namespace {

constexpr int kBadBase = -1;

int base_code(char c) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
        case 'A': return 0;
        case 'C': return 1;
        case 'G': return 2;
        case 'T': return 3;
        default: return kBadBase;
    }
}

class KmerWindow {
public:
    KmerWindow(unsigned kappa, bool canonical)
        : kappa_(kappa),
          canonical_(canonical),
          mask_(kappa < 32 ? (uint64_t(1) << (2 * kappa)) - 1 : ~uint64_t(0)) {}

    void reset() {
        valid_ = 0;
        fwd_ = 0;
        rc_ = 0;
    }

    void feed(char c, std::vector<uint64_t>& out) {
        int code = base_code(c);
        if (code == kBadBase) {
            reset();
            return;
        }
        fwd_ = ((fwd_ << 2) | static_cast<uint64_t>(code)) & mask_;
        rc_ = (rc_ >> 2) |
              (static_cast<uint64_t>(3 - code) << (2 * (kappa_ - 1)));
        if (++valid_ >= kappa_) {
            uint64_t packed = canonical_ ? std::min(fwd_, rc_) : fwd_;
            out.push_back(mix64(packed));
        }
    }

private:
    unsigned kappa_;
    bool canonical_;
    uint64_t mask_;
    unsigned valid_ = 0;
    uint64_t fwd_ = 0;
    uint64_t rc_ = 0;
};

void check_kappa(unsigned kappa) {
    if (kappa < 1 || kappa > 32)
        throw param_error("fasta_kmers: kappa must be in [1,32], got " +
                          std::to_string(kappa));
}

} // namespace

SparseSet fasta_kmers(std::istream& in, unsigned kappa, bool canonical) {
    check_kappa(kappa);
    KmerWindow win(kappa, canonical);
    std::vector<uint64_t> ids;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '>') continue;
        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            win.feed(c, ids);
        }
    }
    return SparseSet::from_unsorted(std::move(ids));
}

std::vector<SparseSet> fasta_kmers_per_record(std::istream& in, unsigned kappa,
                                              bool canonical) {
    check_kappa(kappa);
    std::vector<SparseSet> records;
    KmerWindow win(kappa, canonical);
    std::vector<uint64_t> ids;
    bool in_record = false;
    std::string line;
    auto flush = [&] {
        if (in_record) records.push_back(SparseSet::from_unsorted(std::move(ids)));
        ids.clear();
        win.reset();
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '>') {
            flush();
            in_record = true;
            continue;
        }
        if (!in_record && !line.empty()) in_record = true; // headerless stream
        for (char c : line) {
            if (std::isspace(static_cast<unsigned char>(c))) continue;
            win.feed(c, ids);
        }
    }
    flush();
    return records;
}

std::vector<SparseSet> parse_idset(std::istream& in) {
    std::vector<SparseSet> sets;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::vector<uint64_t> ids;
        uint64_t v = 0;
        while (ls >> v) ids.push_back(v);
        if (!ls.eof())
            throw parse_error("idset: malformed id at line " + std::to_string(line_no));
        sets.push_back(SparseSet::from_unsorted(std::move(ids)));
    }
    return sets;
}

} // namespace sphash
