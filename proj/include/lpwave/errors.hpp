#pragma once

#include <stdexcept>
#include <string>

namespace lpwave {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed spec strings, violated preconditions, bad config.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation needs data the model or basis does not provide.
class ConfigurationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A grid does not cover the support a computation needs.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// A request exceeds the sizes this library handles at desk scale.
class ResourceError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Root finding, bracketing or quadrature failed, or a result is out of range.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// An integral or series that must converge does not.
class DivergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// The truncation planner exhausted its search lattice.
class InfeasibleError : public NumericError {
 public:
  InfeasibleError(const std::string& what, double best_bound)
      : NumericError(what), best_bound_(best_bound) {}
  double best_bound() const noexcept { return best_bound_; }

 private:
  double best_bound_;
};

}  // namespace lpwave
