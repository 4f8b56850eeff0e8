#pragma once

#include <stdexcept>
#include <string>

namespace haus {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite samples, malformed grids, bad files.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (p < 1, sigma <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SymmetryViolation : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

class AliasingError : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class SingularPoint : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Quadrature did not reach its tolerance within the evaluation budget.
/// Carries the best estimate obtained so far.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

/// The integral itself diverges (panel contributions stop shrinking under refinement).
class Divergence : public ConvergenceFailure {
 public:
  using ConvergenceFailure::ConvergenceFailure;
};

}  // namespace haus
