#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace pdp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Base class for every error this library raises on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A callback returned a vector or matrix of the wrong size, or stacked
// arguments do not match the declared dimensions.
struct DimensionMismatch : Error {
  using Error::Error;
};

// The certified strictly feasible point is not strictly feasible.
struct SlaterViolation : Error {
  using Error::Error;
};

// An analytic gradient or Jacobian disagrees with finite differences.
struct GradientMismatch : Error {
  using Error::Error;
};

// The Slater margin gamma is not positive, so no dual ball radius exists.
struct NonPositiveGamma : Error {
  using Error::Error;
};

// Adjacency input to the Metropolis construction was not symmetric.
struct AsymmetricAdjacency : Error {
  using Error::Error;
};

// A solver mode was requested without the callbacks it needs.
struct ModeMismatch : Error {
  using Error::Error;
};

// An iterative routine exhausted its budget above tolerance.
struct NoConvergence : Error {
  using Error::Error;
};

// The instance is too large for an exhaustive procedure.
struct TooLarge : Error {
  using Error::Error;
};

// An inner subproblem (LP or prox) could not be solved to tolerance.
struct InnerSolveFailure : Error {
  using Error::Error;
};

// A configuration file is malformed or inconsistent.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace pdp
