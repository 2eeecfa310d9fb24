#pragma once

#include <stdexcept>
#include <string>

namespace goss {

/// Malformed user input: bad literals, bad field parameters, invalid module data.
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A computation that is well-posed but exceeds a budget (enumeration size, iteration count).
struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A precision or convergence certificate could not be established.
struct certificate_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A hypothesis of a theorem-backed routine does not hold for the given data.
struct hypothesis_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace goss
