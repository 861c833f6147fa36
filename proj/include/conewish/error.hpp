#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace conewish {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (poset files, matrix files, CLI values).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class CycleError : public Error {
 public:
  using Error::Error;
};

class UnknownLabel : public Error {
 public:
  explicit UnknownLabel(const std::string& label)
      : Error("unknown element label '" + label + "'"), label_(label) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

class DuplicateLabel : public Error {
 public:
  explicit DuplicateLabel(const std::string& label)
      : Error("duplicate element label '" + label + "'") {}
};

class PosetMismatch : public Error {
 public:
  PosetMismatch() : Error("operands live on different posets") {}
};

/// An entry that must be zero (unrelated pair, or wrong triangle) is not.
class StructuralZeroViolation : public Error {
 public:
  StructuralZeroViolation(std::size_t row, std::size_t col, const std::string& where)
      : Error("structural zero violated at (" + where + ")"), row_(row), col_(col) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

/// Generalized Cholesky pivot failed: the matrix is not in the cone P.
class NotInCone : public Error {
 public:
  NotInCone(std::size_t index, double pivot, const std::string& label)
      : Error("not in cone: pivot at element '" + label + "' is " + std::to_string(pivot)),
        index_(index),
        pivot_(pivot) {}
  std::size_t index() const { return index_; }
  double pivot() const { return pivot_; }

 private:
  std::size_t index_;
  double pivot_;
};

/// Opposite-order factorization failed: the matrix is not in the dual cone P*.
class NotInDualCone : public Error {
 public:
  NotInDualCone(std::size_t index, double pivot, const std::string& label)
      : Error("not in dual cone: pivot at element '" + label + "' is " +
              std::to_string(pivot)),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// The multiplier violates lambda_i > n_{i.}/2 for the listed elements.
class InvalidMultiplier : public Error {
 public:
  InvalidMultiplier(const std::string& what, std::vector<std::string> violations)
      : Error(what), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class ConditionFViolation : public Error {
 public:
  using Error::Error;
};

class UnsupportedSubcone : public Error {
 public:
  using Error::Error;
};

}  // namespace conewish
