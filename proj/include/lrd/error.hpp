#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lrd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Evaluation outside the mathematical domain (e.g. the d-pole at frequency 0).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Parameters violate the feasible set (d range, AR stability).
class ConstraintError : public Error {
public:
  using Error::Error;
};

/// A computation produced a non-finite value.
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Matrix too ill-conditioned to invert reliably.
class ConditioningError : public Error {
public:
  ConditioningError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

private:
  double condition_;
};

/// Invalid configuration (block sizes, window lengths, orders, ...).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Malformed input data. Carries the offending line numbers when known.
class DataError : public Error {
public:
  explicit DataError(const std::string& what, std::vector<std::size_t> lines = {})
      : Error(what), lines_(std::move(lines)) {}
  const std::vector<std::size_t>& lines() const noexcept { return lines_; }

private:
  std::vector<std::size_t> lines_;
};

}  // namespace lrd
