#pragma once

#include "pdp/problems/builtin.hpp"

namespace pdp {

// Distributed sparse regression with an l1 budget split across agents:
//
//   min ||sum_i A_i x_i - b||^2   s.t.  sum_i ||x_i||_1 <= budget,
//
// written with g_i(x_i) = ||x_i||_1 - budget/N, so the constraint is convex
// but non-smooth and the solver must run in proximal mode. The observation
// b is synthesized from planted sparse blocks, optionally with noise.
struct SparseParams {
  int num_agents = 3;
  int primal_dim = 8;   // K
  int map_dim = 32;     // M, rows of the stacked regression
  int support_per_agent = 2;
  double box_bound = 2.0;
  double noise = 0.0;
  // Budget: < 0 plants the exact total l1 norm of the hidden signal.
  double l1_budget = -1.0;
  unsigned seed = 1;
};

struct SparseInstance {
  BuiltinProblem problem;
  std::vector<Vec> planted_x;
  double l1_budget = 0.0;
};

SparseInstance generate_sparse_regression(const SparseParams& params);

}  // namespace pdp
