#pragma once

#include <stdexcept>
#include <string>

namespace sphash {

// Base for all library errors. CLI exit codes: parse 2, parameter 3,
// incomparable sketches 4.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input data (docword/FASTA/sketch files); carries file/line context
// in the message where available.
struct parse_error : error {
    using error::error;
};

// Argument outside its stated domain (gamma, m, kappa, plan probabilities...).
struct param_error : error {
    using error::error;
};

// Similarity undefined for the given inputs (e.g. Jaccard of two empty sets).
struct undefined_similarity_error : error {
    using error::error;
};

// Sketches built under different parameters; comparing them is rejected
// before any arithmetic.
struct incomparable_error : error {
    using error::error;
};

} // namespace sphash
