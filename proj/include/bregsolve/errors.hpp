#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bregsolve {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the domain of the requested operation
/// (e.g. a nonpositive point handed to the entropy kernel).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Mismatched vector/matrix dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid convex-combination weights (nonpositive or not summing to one).
class WeightError : public Error {
 public:
  using Error::Error;
};

/// A finite result could not be represented (exp overflow and friends).
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// The constraint set does not meet the domain of the kernel.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// An inner iterative solve hit its iteration cap before its residual target.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// No grid point was feasible.
class EmptyGridError : public Error {
 public:
  using Error::Error;
};

/// A sample pair with x == y where distinct points are required.
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

/// Error escaping one stage of the main iteration, annotated with the stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("stage " + stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace bregsolve
