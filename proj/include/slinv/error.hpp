#pragma once

#include <stdexcept>
#include <string>

namespace slinv {

/// Base for every numerical failure raised by the library.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Step-size underflow or a non-finite right-hand side during an IVP solve.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, double x)
      : NumericalError(what + " at x=" + std::to_string(x)), x_(x) {}
  double x() const { return x_; }

 private:
  double x_;
};

class QuadratureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Eigenvalue bracketing failure or a zero-count certificate that never matched.
class EigenvalueError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InversionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Bad caller input: violated preconditions, malformed configs and files.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace slinv
