// errors.hpp - exception types shared by the bb84 library.
//
// Domain errors (an infeasible state, a missing root) derive from
// bb84::DomainError; malformed inputs derive from std::invalid_argument.
// The CLI maps the first family to exit status 1.

#pragma once

#include <stdexcept>
#include <string>

namespace bb84 {

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotHermitian : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class NotNormalized : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A (epsilon, c22) pair outside -1 <= c22 <= 2 epsilon - 1.
class InfeasiblePoint : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Pauli coefficients that do not describe a positive operator.
class NotPositive : public DomainError {
 public:
  NotPositive(const std::string& what, double smallest_eigenvalue)
      : DomainError(what), smallest_eigenvalue_(smallest_eigenvalue) {}

  double smallest_eigenvalue() const noexcept { return smallest_eigenvalue_; }

 private:
  double smallest_eigenvalue_;
};

class NoSignChange : public DomainError {
 public:
  using DomainError::DomainError;
};

class NoFeasibleSample : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace bb84
