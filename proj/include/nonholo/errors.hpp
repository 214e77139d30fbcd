#pragma once

#include <stdexcept>
#include <string>

namespace nonholo {

/// Invalid configuration or arguments (dimension mismatches, bad scenario
/// files, inadmissible initial data). Maps to CLI exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure (non-SPD metric, degenerate constraint point,
/// rank-parity breakdown). Maps to CLI exit code 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace nonholo
