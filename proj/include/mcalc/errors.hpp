#pragma once

#include <stdexcept>

namespace mcalc {

// Caller-supplied data violates a precondition: bad weights, mismatched
// dimensions, malformed files or configs.
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A request lies outside the mathematical domain of an operation: cut-locus
// point pairs, geodesic shifts at or past the injectivity radius.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A computation met values outside its numeric contract: non-finite
// evaluations, off-manifold drift, a limit that refuses to settle where one
// is required.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mcalc
