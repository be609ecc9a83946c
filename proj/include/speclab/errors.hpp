#pragma once

#include <stdexcept>
#include <string>

namespace speclab {

// Precondition violations: bad radii, out-of-range spectral parameters, etc.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Iteration/bracketing failures; message carries diagnostics.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A mathematical invariant the library promises was contradicted by data.
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Valid request outside the supported scope (documented limitation).
struct UnsupportedInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Perturbation outside the smallness regime where the mapped problem is elliptic.
struct PerturbationTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed external data; line is 1-based.
struct IngestionError : std::runtime_error {
    std::size_t line;
    IngestionError(const std::string& msg, std::size_t line_)
        : std::runtime_error(msg + " (line " + std::to_string(line_) + ")"), line(line_) {}
};

} // namespace speclab
