#pragma once

#include "pdp/problems/builtin.hpp"

namespace pdp {

// Seeded convex quadratic test family: F(u) = ||u - t||^2, linear agent
// maps, one affine coupled constraint, unit box sets.
//
// The instance is built backwards from a KKT point. Draw a box-interior
// x*, a constraint direction c with rows a_i = 2 A_i^T c, a multiplier
// lambda* > 0, and set h_i = -a_i^T x_i* and t = sum_i A_i x_i* + lambda* c.
// Then (x*, lambda*) satisfies stationarity, feasibility and complementary
// slackness with the coupled constraint tight, so x* is a global optimum
// with value ||lambda* c||^2 and an active constraint. The stacked map has
// orthogonal rows and the constraint gain is matched to the cost curvature,
// so primal-dual recursions on these instances settle quickly instead of
// orbiting the saddle for the whole iteration budget.
struct QpParams {
  int num_agents = 5;
  int primal_dim = 2;
  int map_dim = 2;
  unsigned seed = 1;
};

struct QpInstance {
  BuiltinProblem problem;
  std::vector<Vec> planted_x;    // one optimal primal point
  double planted_value = 0.0;    // Fbar at the optimum
  double planted_lambda = 0.0;   // optimal multiplier of the single row
};

QpInstance random_qp(const QpParams& params);

}  // namespace pdp
