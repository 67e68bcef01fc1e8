#pragma once

#include <stdexcept>
#include <string>

namespace ddlab {

// Bad model/query configuration. CLI maps this to exit code 2.
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A matrix or denominator is numerically singular.
struct singular_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iteration or quadrature failed to reach its tolerance.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested a quantity the model family does not provide.
struct unsupported_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A marching solution left its admissible range.
struct instability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ddlab
