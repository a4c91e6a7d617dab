#pragma once

#include <stdexcept>
#include <string>

namespace commlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands have incompatible or invalid shapes.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// Input violates a mathematical precondition (non-Hermitian, nonzero trace, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A numerical routine failed to converge.
class NumericError : public Error {
public:
  using Error::Error;
};

/// An explicit construction failed one of its defining identities.
class ConstructionError : public Error {
public:
  using Error::Error;
};

/// A verification pass found a violation beyond tolerance.
class VerificationError : public Error {
public:
  using Error::Error;
};

/// Two computations that must agree did not; signals conditioning trouble.
class ConsistencyError : public Error {
public:
  using Error::Error;
};

/// Malformed text input. Carries the 1-based line number (0 if not applicable).
class ParseError : public Error {
public:
  ParseError(const std::string& message, std::size_t line)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        detail_(message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }
  /// Message without the line prefix.
  const std::string& detail() const noexcept { return detail_; }

private:
  std::string detail_;
  std::size_t line_;
};

}  // namespace commlab
