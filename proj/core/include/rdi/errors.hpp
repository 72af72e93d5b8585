#pragma once

#include <stdexcept>
#include <string>

namespace rdi {

// Bad arguments: unknown variable names, invalid probabilities, mismatched
// shapes, case/parameter mismatches.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Dense product alphabet or sequence enumeration too large for exact work.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested distortion below the minimum achievable one.
struct InfeasibleError : std::runtime_error {
    double d_min;
    InfeasibleError(const std::string& msg, double d_min_)
        : std::runtime_error(msg), d_min(d_min_) {}
};

// A declared structural assumption (e.g. a Markov chain) does not hold.
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rdi
