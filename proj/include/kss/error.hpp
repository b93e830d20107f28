#pragma once

#include <stdexcept>
#include <string>

namespace kss {

/// Base for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
    /// Sub-step of a time step that raised the error ("cfl", "step_n",
    /// "step_c", "stokes"); empty outside the stepping loop.
    std::string stage;
};

/// A parameter outside its documented domain (p < 1, negative density, ...).
struct InvalidParameter : Error {
    using Error::Error;
};

/// Poisson solver did not reach its tolerance.
struct SolverFailure : Error {
    SolverFailure(const std::string& what, double residual, int iterations)
        : Error(what), final_residual(residual), iterations(iterations) {}
    double final_residual;
    int iterations;
};

/// A transport update produced a negative value beyond rounding.
struct PositivityViolation : Error {
    using Error::Error;
};

/// The admissible time step fell below the configured floor.
struct DtCollapse : Error {
    DtCollapse(const std::string& what, double dt) : Error(what), dt(dt) {}
    double dt;
};

/// Bad or unknown configuration key; `key` names the offending entry.
struct ConfigError : Error {
    ConfigError(const std::string& key, const std::string& what)
        : Error(key.empty() ? what : key + ": " + what), key(key) {}
    std::string key;
};

struct InsufficientData : Error {
    using Error::Error;
};

}  // namespace kss
