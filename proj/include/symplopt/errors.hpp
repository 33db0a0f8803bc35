#pragma once

#include <stdexcept>
#include <string>

namespace symplopt {

/// Shape mismatch or odd dimensions where an even split is required.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix required to be symmetric positive definite is not.
class DefinitenessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural invariant (skew-symmetry, tangency, feasibility) is violated.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symplectic Gram-Schmidt hit a pivot below the breakdown threshold.
class SrBreakdownError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A retraction was evaluated outside its domain of definition.
/// Line searches treat this as "shrink the step and retry".
class RetractionDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The direct saddle-point solve failed (singular block or missing
/// constant ambient Hessian); callers may fall back to the Krylov path.
class DirectSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Orthogonal-complement frame construction failed (rank collapse).
class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid benchmark configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File I/O failure (Matrix Market, config, result files).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace symplopt
