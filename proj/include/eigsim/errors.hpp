#pragma once

#include <stdexcept>

namespace eigsim {

// Invalid user input: malformed scenario files, out-of-range parameters.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Linear-algebra failure, NaN propagation, self-oscillation threshold.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Harmonic truncation did not stabilize below the hard cap.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace eigsim
