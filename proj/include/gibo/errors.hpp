#pragma once

#include <stdexcept>
#include <string>

namespace gibo {

/// A kernel or covariance matrix failed to factorize (not positive definite
/// relative to the noise level).
struct ConditioningError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A closed-loop system required to be stable is not.
struct StabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Hyperparameter estimation produced no finite objective from any start.
struct FittingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An experiment configuration is invalid; message carries the field path.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A result file could not be parsed; message carries the line number.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gibo
