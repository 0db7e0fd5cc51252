#pragma once

#include <stdexcept>
#include <string>

namespace gkdv {

// Base of every error raised by the library. The CLI maps the subclasses
// onto exit codes (usage / numerical / I/O).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Numerical failures. Everything below maps to exit code 2 in the CLI.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SolverDivergence : public NumericalError {
 public:
  SolverDivergence(const std::string& what, double last_valid_time)
      : NumericalError(what), last_valid_time_(last_valid_time) {}
  double last_valid_time() const noexcept { return last_valid_time_; }

 private:
  double last_valid_time_;
};

class CflViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PastBreaking : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NewtonNonconvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateFlux : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonmonotoneData : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class Nonconvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace gkdv
