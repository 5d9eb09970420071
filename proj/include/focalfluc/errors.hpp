#pragma once

#include <stdexcept>
#include <string>

namespace focalfluc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside the admissible regime (bad θ₀, b ≤ 0, x ≤ 0 for H₀, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// f″ vanishes (to tolerance) at a critical angle.
class DegenerateExtremumError : public Error {
 public:
  using Error::Error;
};

/// More than one partner angle found for a reflection angle.
class MultiplicityError : public Error {
 public:
  using Error::Error;
};

/// dβ/dα requested at a pair where f′(β) vanishes.
class SingularDerivativeError : public Error {
 public:
  using Error::Error;
};

/// A critical angle sits on a mirror edge; the integral genuinely diverges.
class EdgeSingularError : public Error {
 public:
  using Error::Error;
};

/// The Laurent window cannot meet the requested tolerance.
class WindowTooLargeError : public Error {
 public:
  using Error::Error;
};

/// Iterative routine ran out of budget before meeting its tolerance.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double achieved_error)
      : Error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// No specular path hits the strip, so the geometric wave is undefined.
class NoSpecularPathError : public Error {
 public:
  using Error::Error;
};

/// Too few samples or too short a range for a scaling fit.
class InsufficientRangeError : public Error {
 public:
  using Error::Error;
};

/// Trap temperature requested for Λ ≤ 0.
class NoTrapError : public Error {
 public:
  using Error::Error;
};

}  // namespace focalfluc
