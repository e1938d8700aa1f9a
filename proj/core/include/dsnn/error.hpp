#pragma once

#include <stdexcept>
#include <string>

namespace dsnn {

// Root of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes of operands do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// An argument lies outside the operation's domain.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Input carries no information for the requested measure (e.g. an all-zero vector).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// A PQ report no longer matches the mask it was computed from.
class StaleReportError : public Error {
 public:
  using Error::Error;
};

// Non-finite value encountered in a numeric path.
class NumericError : public Error {
 public:
  using Error::Error;
};

// File contents do not follow the expected container format.
class FormatError : public Error {
 public:
  using Error::Error;
};

// File ended before the declared payload.
class LengthError : public Error {
 public:
  using Error::Error;
};

// Two inputs that must agree do not (e.g. image/label counts).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Synthetic data generation could not satisfy its constraints.
class GenerationError : public Error {
 public:
  using Error::Error;
};

// A training invariant was violated at runtime.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Run configuration rejected; key() names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& message)
      : Error("config key '" + key + "': " + message), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace dsnn
