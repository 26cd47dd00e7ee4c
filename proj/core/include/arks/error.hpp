#pragma once

#include <stdexcept>
#include <string>

namespace arks {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument is outside its documented domain (negative time, eps <= 0, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// An operation was called in a configuration it does not support.
class MisuseError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver did not reach its tolerance.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A structural guarantee (positivity, finiteness) was violated; indicates a bug.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A time series cannot be fitted (too few samples, nonpositive values).
class InvalidSeries : public Error {
 public:
  using Error::Error;
};

/// Configuration validation failure; `field` names the offending key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace arks
