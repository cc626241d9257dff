#pragma once

#include <stdexcept>
#include <string>

namespace trawlkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (negative time, level not in (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The series is too short for the requested estimator or lag.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// An estimate that later steps divide by is zero or negative (e.g. a_hat(0) <= 0).
class DegenerateEstimateError : public Error {
 public:
  using Error::Error;
};

/// Invalid or unaffordable configuration (simulation budget, JSON config).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace trawlkit
