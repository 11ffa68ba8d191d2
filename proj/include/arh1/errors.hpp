#pragma once

#include <stdexcept>
#include <string>

namespace arh1 {

/// Invalid configuration or argument (CLI exit code 1).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Component or time index outside the materialized range.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A prior hyperparameter that cannot be represented in double precision.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// A component whose lagged energy sum is exactly zero.
class DegenerateTrajectoryError : public std::runtime_error {
 public:
  DegenerateTrajectoryError(const std::string& what, std::size_t component)
      : std::runtime_error(what), component_(component) {}

  [[nodiscard]] std::size_t component() const noexcept { return component_; }

 private:
  std::size_t component_;
};

/// Negative discriminant in the closed-form Bayes estimator (a + b < 2).
class ComplexRootError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An operation was called without the data it needs (e.g. no innovations).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace arh1
