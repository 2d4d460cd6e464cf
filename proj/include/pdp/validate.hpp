#pragma once

#include <string>
#include <vector>

#include "pdp/problem.hpp"

namespace pdp {

enum class CheckCode {
  Dimensions,
  CallbackShapes,
  ModeCallbacks,
  CostGradient,
  MapJacobian,
  ConstraintJacobian,
  ProjectionIdempotent,
  ProjectionNonexpansive,
  SetRadius,
  SlaterPoint,
  SlaterGamma,
  CostGradLipschitz,
  CostGradBound,
  MapLipschitz,
  ConstraintLipschitz,
  ConstraintGradLipschitz,
  FbarGradLipschitz,
  ProxSanity,
};

struct CheckResult {
  CheckCode code;
  std::string name;
  bool passed = false;
  double value = 0.0;  // measured quantity, check-specific
  double limit = 0.0;  // threshold it was compared against
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> entries;

  bool ok() const;
  const CheckResult* failure(CheckCode code) const;
  std::string to_string() const;

  // Throws the typed error corresponding to the first failed entry.
  void require() const;
};

// Spot-checks the spec on sampled points: callback shapes, analytic
// derivatives against finite differences, projection laws, the Slater
// certificate and every declared Lipschitz constant. Structural size errors
// throw immediately; numeric disagreements are reported as failed entries.
ValidationReport validate_problem(const ProblemSpec& spec, unsigned seed = 0,
                                  int num_samples = 25);

}  // namespace pdp
