#pragma once

#include <stdexcept>
#include <string>

namespace mumsep {

// Error taxonomy. The CLI maps these onto its exit-code contract:
// argument/shape/configuration problems -> 2, positivity failures -> 3,
// numeric-integrity violations -> 4.

// Dimension is zero, too small, or outside the supported family (e.g. a
// non-prime dimension passed to the MUB constructor).
struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Operand sizes do not match (matrix/matrix or operator/state).
struct shape_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A documented parameter range or precondition was violated.
struct contract_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Invalid state-construction input: zero vector, bad mixture weights.
struct state_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An operator or density matrix fails positive semidefiniteness.
struct positivity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inconsistent measurement/state configuration (mismatched M, wrong set
// count, unsupported partition).
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A quantity that must be real came back with too large an imaginary part.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mumsep
