#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eqchern {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands built over different exterior algebras.
class AlgebraMismatch : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Input shape outside what an algorithm supports (e.g. non-diagonal Duhamel body).
class UnsupportedShape : public Error {
 public:
  using Error::Error;
};

class UnsupportedModel : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Evaluation too close to a pole of a character or of the Â factor.
class PoleError : public Error {
 public:
  using Error::Error;
};

// Integrand without Gaussian decay; pair it against test functions instead.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace eqchern
