#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lgi {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument violated a documented precondition (e.g. non-antisymmetric
/// input to vee).
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// A map was evaluated at one of its singular points (log near a pi-rotation).
class SingularityError : public Error {
public:
  using Error::Error;
};

/// Groupoid contract violated, typically a non-composable pair.
class ContractViolation : public Error {
public:
  using Error::Error;
};

/// Newton iteration exhausted its budget without reaching the tolerance.
class MaxItersExceeded : public Error {
public:
  MaxItersExceeded(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

private:
  int iterations_;
  double residual_;
};

/// The Newton Jacobian (equivalently the regularity matrix) is singular or
/// too ill-conditioned to trust.
class SingularJacobian : public Error {
public:
  SingularJacobian(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

private:
  double condition_;
};

/// Tangent decomposition onto the invariant lift basis lost rank.
class DecompositionError : public Error {
public:
  using Error::Error;
};

/// A step error tagged with the index of the step that failed.
class StepFailure : public Error {
public:
  StepFailure(const std::string& what, std::size_t step) : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

private:
  std::size_t step_;
};

}  // namespace lgi
