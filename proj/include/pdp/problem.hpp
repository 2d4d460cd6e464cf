#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pdp/projections.hpp"
#include "pdp/types.hpp"

namespace pdp {

// Problem template: N agents hold private blocks x_i in X_i subset R^K.
// They jointly minimize F(sum_i f_i(x_i)) subject to sum_i g_i(x_i) <= 0,
// where F: R^M -> R is convex and each coupled constraint has dimension P.
struct Dimensions {
  int num_agents = 0;      // N
  int primal_dim = 0;      // K, per agent
  int map_dim = 0;         // M, range of the f_i
  int constraint_dim = 0;  // P, rows of the coupled constraint
};

struct GlobalCost {
  std::function<double(const Vec&)> eval;  // F(u), u in R^M
  std::function<Vec(const Vec&)> grad;     // gradient of F
  double grad_lipschitz = 0.0;             // G_F: Lipschitz constant of grad
  double grad_bound = 0.0;  // L_F: norm bound for grad on reachable inputs
};

struct AgentFunctions {
  std::function<Vec(const Vec&)> f;           // f_i: R^K -> R^M
  std::function<Mat(const Vec&)> f_jacobian;  // M x K
  std::function<Vec(const Vec&)> g;           // g_i: R^K -> R^P, convex rows

  // Present in smooth (gradient-perturbation) mode.
  std::function<Mat(const Vec&)> g_jacobian;  // P x K

  // Present in proximal mode: exact minimizer over X_i of
  //   weights^T g_i(a) + ||a - v||^2 / (2 rho),  weights >= 0.
  std::function<Vec(const Vec&, const Vec& weights, double rho)> g_prox;

  // Deterministic subgradient rows of g_i, used for the primal step in
  // proximal mode. Smooth agents can leave this empty and the Jacobian is
  // used instead.
  std::function<Mat(const Vec&)> g_subgradient;

  std::function<Vec(const Vec&)> project;  // Euclidean projection onto X_i

  // Componentwise bounding box enclosing X_i, for exhaustive oracles.
  // Empty vectors mean "not provided". hull_exact marks sets that are the
  // box itself, which lets solvers use componentwise clamping and active-set
  // steps instead of the generic projection.
  Vec hull_lo, hull_hi;
  bool hull_exact = false;

  double f_lipschitz = 0.0;       // L_f: per component of f_i
  double g_lipschitz = 0.0;       // L_g: per row of g_i
  double g_grad_lipschitz = 0.0;  // G_g: per row gradient, 0 for affine g_i
  double set_radius = 0.0;        // D_x: norm bound over X_i
};

// Strictly feasible point certifying a bounded dual optimal set. gamma is
// the constraint margin min_p { -sum_i g_ip(xbar_i) } and q_tilde is any
// lower bound on the dual function (0 works whenever Fbar >= 0).
struct SlaterCertificate {
  std::vector<Vec> points;  // xbar_i, one per agent
  double gamma = 0.0;
  double q_tilde = 0.0;
  double slack_margin = 1.0;  // delta, enlarges the ball strictly
};

struct ProblemSpec {
  Dimensions dims;
  GlobalCost cost;
  std::vector<AgentFunctions> agents;
  SlaterCertificate slater;
  double fbar_grad_lipschitz = 0.0;  // G_Fbar: Lipschitz constant of grad Fbar
  std::string name;
  std::string cache_key;  // stable identity for oracle caching
};

// Stacking helpers: the flat layout is agent-major, x = (x_1, ..., x_N).
Vec stack(const std::vector<Vec>& blocks);
std::vector<Vec> unstack(const ProblemSpec& spec, const Vec& x);

// Aggregates over agents, accumulated in agent index order.
Vec sum_f(const ProblemSpec& spec, const std::vector<Vec>& xs);
Vec sum_g(const ProblemSpec& spec, const std::vector<Vec>& xs);

// Fbar(x) = F(sum_i f_i(x_i)).
double objective(const ProblemSpec& spec, const std::vector<Vec>& xs);

// L(x, lambda) = Fbar(x) + lambda^T sum_i g_i(x_i), with x stacked.
double eval_lagrangian(const ProblemSpec& spec, const Vec& x, const Vec& lambda);
double eval_lagrangian(const ProblemSpec& spec, const std::vector<Vec>& xs,
                       const Vec& lambda);

// Radius of the dual ball: (objective_at_slater - q_tilde) / gamma + delta.
double dual_ball_radius(const SlaterCertificate& cert, double objective_at_slater);
double dual_ball_radius(const ProblemSpec& spec);

// Recomputes the constraint margin of the certified point from scratch.
double slater_margin(const ProblemSpec& spec);

// Direction of the primal step for agent i at the point x:
//   grad f_i(x)^T w + J^T mu
// where w is a gradient of F evaluated by the caller and J is the constraint
// Jacobian (or chosen subgradient) at x. Shared by the distributed solver,
// the centralized baselines and the diagnostics so that all paths perform
// bit-identical arithmetic.
Vec primal_direction(const AgentFunctions& agent, const Vec& x, const Vec& w,
                     const Mat& constraint_rows, const Vec& mu);

// Constraint rows used for primal steps: the Jacobian in smooth mode, the
// deterministic subgradient otherwise.
Mat constraint_rows_at(const AgentFunctions& agent, const Vec& x);

}  // namespace pdp
