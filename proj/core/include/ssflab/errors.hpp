// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SSFLAB_ERRORS_HPP
#define SSFLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ssflab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class NonSquareError : public Error {
 public:
  using Error::Error;
};

class HermiticityError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class FunctionEvalError : public Error {
 public:
  using Error::Error;
};

class PairMismatchError : public Error {
 public:
  using Error::Error;
};

class EmptyVectorListError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class UnsupportedWeightError : public Error {
 public:
  using Error::Error;
};

/// Scenario file could not be read as structured text. Carries line/column.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error("parse error at line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Scenario parsed but violates an invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ssflab

#endif  // SSFLAB_ERRORS_HPP
