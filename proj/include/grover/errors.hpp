#pragma once

#include <stdexcept>
#include <string>

namespace grover {

// Base class for all domain errors raised by this library. Anything else
// escaping the library is a bug, not bad input.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& msg)
      : Error("line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class UnknownGate : public Error {
 public:
  using Error::Error;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

class RecursionDetected : public Error {
 public:
  using Error::Error;
};

class InvalidMarkedState : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedGate : public Error {
 public:
  using Error::Error;
};

class SizeLimit : public Error {
 public:
  using Error::Error;
};

class OracleNotFound : public Error {
 public:
  using Error::Error;
};

class MalformedOracle : public Error {
 public:
  using Error::Error;
};

class DuplicateMarkedState : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotNormalized : public Error {
 public:
  using Error::Error;
};

}  // namespace grover
