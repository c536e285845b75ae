#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sfacheck {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two predicates (or a predicate and an element) from different algebras.
class AlgebraMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed text. `line` is 0 when the input is a single expression.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(format(message, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column) {
    if (line == 0) return "parse error at column " + std::to_string(column) + ": " + message;
    return "parse error at line " + std::to_string(line) + ", column " + std::to_string(column) +
           ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

/// Well-formed text that names something undeclared or out of range.
class SemanticError : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

/// A brute-force or enumeration bound was exceeded.
class BoundExceeded : public Error {
 public:
  using Error::Error;
};

class UnsupportedTerm : public Error {
 public:
  using Error::Error;
};

class MissingVariable : public Error {
 public:
  using Error::Error;
};

class MissingConcreteSets : public Error {
 public:
  using Error::Error;
};

class TooManySetVariables : public Error {
 public:
  using Error::Error;
};

class TooManyGenerators : public Error {
 public:
  using Error::Error;
};

class InvalidFlow : public Error {
 public:
  using Error::Error;
};

/// The arithmetic search exceeded its case or node budget.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace sfacheck
