#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prefadvisor {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix dimensions disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A precondition on a scalar argument does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Base for problems with input data (as opposed to configuration).
class DataError : public Error {
 public:
  using Error::Error;
};

class EmptyDataError : public DataError {
 public:
  using DataError::DataError;
};

/// Malformed text input. `line()` is 1-based, 0 when not applicable.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : DataError(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class VersionError : public ParseError {
 public:
  using ParseError::ParseError;
};

class DivisionByZeroError : public DataError {
 public:
  using DataError::DataError;
};

class ZeroVarianceError : public DataError {
 public:
  using DataError::DataError;
};

class InsufficientDataError : public DataError {
 public:
  using DataError::DataError;
};

/// Rule file or rule set that fails load-time validation.
class RuleValidationError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace prefadvisor
