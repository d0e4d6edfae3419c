#pragma once

#include <stdexcept>
#include <string>

namespace qultra {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failures of the numerics themselves (poles, truncation budget, overflow).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A denominator factor of a q-shifted factorial vanished.
class PoleError : public NumericalError {
 public:
  PoleError(const std::string& what, int factor_index)
      : NumericalError(what + " (vanishing factor index " +
                       std::to_string(factor_index) + ")"),
        index_(factor_index) {}

  int factor_index() const noexcept { return index_; }

 private:
  int index_;
};

/// A series or product did not meet the truncation policy within budget.
class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The operator denominator vanishes (z = +-1 for the divided difference).
class SingularPoint : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Arguments lie outside the convergence region of a series or identity.
class RegionError : public Error {
 public:
  using Error::Error;
};

/// Arguments violate a structural precondition (base, positivity window, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or command-line input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qultra
