#pragma once

#include <stdexcept>

namespace zonoid {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Target value outside the range of a monotone map being inverted.
struct RangeError : std::range_error {
    using std::range_error::range_error;
};

// Operation requires a property the input does not certify
// (log-concavity, positive support, non-negative time shift).
struct UnsupportedError : std::logic_error {
    using std::logic_error::logic_error;
};

// Input object violates its own invariants (call curve not convex, ...).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Finite-difference denominator too small to divide by.
struct SingularError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace zonoid
