#pragma once

#include <string>

#include "pdp/problem.hpp"

namespace pdp {

// High-accuracy solution of a problem instance, produced independently of
// the iterative solvers and certified by its KKT residuals.
struct ReferenceSolution {
  std::vector<Vec> xs;
  Vec lambda;
  double value = 0.0;
  double feas_residual = 0.0;   // ||(sum_i g_i(x))^+||
  double compl_residual = 0.0;  // |lambda^T sum_i g_i(x)|
  double stat_residual = 0.0;   // projected-gradient mapping norm
  std::string method;
  int outer_iters = 0;
};

struct OracleOptions {
  // Feasibility target. Complementarity allows 10x; stationarity allows 10x
  // scaled by the cost gradient magnitude at the solution, since a raw
  // mapping norm does not transfer across problem scales.
  double tol = 1e-8;
  int max_outer = 60;       // multiplier updates or bisection halvings
  int max_inner = 20000;    // accelerated proximal-gradient iterations
  double penalty0 = 10.0;   // initial augmented-Lagrangian penalty
  double penalty_cap = 1e8;
  std::string cache_dir;    // empty disables the JSON cache
};

// Solves min F(sum f_i) s.t. sum g_i <= 0 over the product of the X_i.
// Smooth constraints go through an augmented-Lagrangian outer loop with
// accelerated projected-gradient inner solves; single-row constraints that
// only offer a prox operator go through bisection on the scalar multiplier.
// Throws NoConvergence when the residual targets cannot be met and
// ModeMismatch when neither path applies. Results are cached as JSON under
// cache_dir keyed by the instance cache_key; cached entries are re-certified
// against the residual targets before being trusted.
ReferenceSolution solve_reference(const ProblemSpec& spec,
                                  const OracleOptions& opts = {});

// Exhaustive minimization over a per-coordinate grid spanning the hull boxes,
// with every candidate pushed through the agent projections. Only for tiny
// instances; throws TooLarge above four total primal dimensions. Ties are
// broken toward the lexicographically smaller stacked point.
struct GridSolution {
  std::vector<Vec> xs;
  double value = 0.0;
  long candidates = 0;
  long feasible = 0;
};

GridSolution brute_force_grid(const ProblemSpec& spec, int points_per_dim,
                              double feasibility_slack = 1e-9);

// Grid minimizer of w^T g(alpha) + ||alpha - v||^2 / (2 rho) over the box
// [lo, hi], used to pin down closed-form prox operators in the tests.
// Throws TooLarge above two dimensions.
Vec prox_grid_oracle(const std::function<Vec(const Vec&)>& g, const Vec& v,
                     const Vec& w, double rho, const Vec& lo, const Vec& hi,
                     int points_per_dim);

// Worst relative mismatch between the registered derivatives and central
// differences at sampled feasible points, split by callback family.
struct FdCheck {
  double worst_cost = 0.0;
  double worst_map = 0.0;
  double worst_constraint = 0.0;
  double worst() const;
};

FdCheck fd_check(const ProblemSpec& spec, unsigned seed = 0, int samples = 10,
                 double step = 1e-6);

}  // namespace pdp
