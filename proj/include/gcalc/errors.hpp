#pragma once

#include <stdexcept>
#include <string>

namespace gcalc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions do not agree (matrix vs. uncertainty set, etc.).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter is outside its admissible domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Explicit stepping would not be monotone with the requested configuration.
class CflError : public Error {
 public:
  using Error::Error;
};

/// A payoff or intermediate function produced a non-finite value.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature did not reach its tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_estimate)
      : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}
  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

/// Simulated state exceeded the blow-up guard.
class BlowUpError : public Error {
 public:
  using Error::Error;
};

/// Partition of a process does not match the sample path it is integrated against.
class PartitionError : public Error {
 public:
  using Error::Error;
};

/// A Monte Carlo request exceeds the configured work budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration document.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace gcalc
