#pragma once

#include <stdexcept>
#include <string>

namespace qhedge {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The structure condition (SC) fails for the given model: the drift part
// charges a segment on which the variance does not move.
struct SCViolated : Error {
    explicit SCViolated(const std::string& reason)
        : Error("structure condition violated: " + reason) {}
};

// A quadrature could not certify the requested tolerance.
struct QuadratureFailure : Error {
    using Error::Error;
};

// Payoff reconstruction from a truncated Fourier density missed its target.
struct TruncationTooTight : Error {
    using Error::Error;
};

// Exact path sampling is not available for this model family.
struct UnsupportedModel : Error {
    using Error::Error;
};

// The computed hedging-error variance came out below -tolerance.
struct NegativeVariance : Error {
    using Error::Error;
};

// Configuration file problem, with line/key diagnostics in the message.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace qhedge
