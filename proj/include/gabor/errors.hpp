#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gabor {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration: bad specs, schema violations, grids too small
/// for the requested analysis, degenerate probe sets.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// API misuse: mismatched lattices, non-monotone net parameters.
class UsageError : public Error {
public:
    using Error::Error;
};

/// A documented precondition does not hold (e.g. lattice rejected by the
/// density criterion, window fails a sign requirement).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A requested capability is unavailable: missing derivatives, no valid
/// closed-form transform, integrability violated.
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// Numerical failure. Carries the last two estimates of a refinement
/// sequence and, for iterative solvers, the residual history.
class NumericError : public Error {
public:
    NumericError(const std::string& msg, std::complex<double> last,
                 std::complex<double> previous)
        : Error(msg), last_estimate(last), previous_estimate(previous) {}

    NumericError(const std::string& msg, std::vector<double> residuals)
        : Error(msg), residual_history(std::move(residuals)) {}

    std::complex<double> last_estimate{0.0, 0.0};
    std::complex<double> previous_estimate{0.0, 0.0};
    std::vector<double> residual_history;
};

}  // namespace gabor
