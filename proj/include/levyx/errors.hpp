#pragma once

#include <stdexcept>
#include <string>

namespace levyx {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite coefficient evaluation; message carries the (t,x) location.
struct EvaluationError : Error { using Error::Error; };

// Fourier variable outside the model's admissible contour strip.
struct ContourError : Error { using Error::Error; };

struct DomainError : Error { using Error::Error; };

// Jet center mismatch or exhausted derivative budget.
struct JetError : Error { using Error::Error; };

// Square-root branch cut too close to the evaluation path.
struct BranchError : Error { using Error::Error; };

struct ExpansionError : Error { using Error::Error; };

struct IntegrationError : Error { using Error::Error; };

struct QuadratureError : Error { using Error::Error; };

// Price outside no-arbitrage bounds; message reports the bounds.
struct ArbitrageError : Error { using Error::Error; };

// Near-degenerate eigenvalue denominators in the reference series.
struct DegeneracyError : Error { using Error::Error; };

// Reference noise dominates the regression signal.
struct InconclusiveError : Error { using Error::Error; };

struct ConfigError : Error { using Error::Error; };

} // namespace levyx
