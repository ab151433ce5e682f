#pragma once

#include <stdexcept>
#include <string>

namespace radau {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A nonpositive pivot in an LDL^T factorization.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// solve_shifted / eta terms called with mu at or above the smallest eigenvalue.
class ShiftNotBelowSpectrum : public Error {
 public:
  using Error::Error;
};

/// The tridiagonal eigensolver exceeded its iteration cap.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, int index) : Error(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// A Gauss-Radau recurrence was evaluated with mu not below the current
/// smallest Ritz value; bounds from this point on are not guaranteed.
class BoundDiagnostic : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; carries the offending line (1-based, 0 if unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace radau
