#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pdp/network.hpp"
#include "pdp/parallel.hpp"
#include "pdp/problem.hpp"

namespace pdp {

enum class PerturbationMode { Gradient, Proximal };
enum class AverageKind { Weighted, Uniform };

// Diminishing step a_k = a / (b + k): nonincreasing, nonsummable, square
// summable.
struct StepSchedule {
  double a = 1.0;
  double b = 10.0;
  double at(int k) const { return a / (b + k); }
};

struct SolverConfig {
  PerturbationMode mode = PerturbationMode::Gradient;
  StepSchedule step;
  double rho1 = 1e-2;
  double rho2 = 1e-2;
  int max_iters = 1000;
  AverageKind average = AverageKind::Weighted;
  bool diagnostics = false;  // per-round centralized perturbation residual
  int workers = 1;
  double dual_radius = 0.0;  // <= 0 derives the radius from the certificate
  std::vector<Vec> x0;       // empty: project of the origin, per agent
};

struct AgentState {
  Vec x, x_prev;
  Vec lambda;
  Vec y, z;                            // trackers of avg f_j and avg g_j
  Vec y_tilde, z_tilde, lambda_tilde;  // values after the gossip round
  Vec alpha, beta;                     // perturbation points, current round
  Vec x_avg;                           // running average of the x iterates
};

struct TraceRow {
  int k = 0;
  double a_k = 0.0;
  double obj_avg = 0.0;     // Fbar at the running average
  double obj_raw = 0.0;     // Fbar at the current iterate
  double viol = 0.0;        // ||(sum_i g_i(x_avg))^+||
  double compl_slack = 0.0; // |mean(lambda)^T sum_i g_i(x_avg)|
  double dual_disagree = 0.0;
  double y_disagree = 0.0;
  double z_disagree = 0.0;
  double pert_residual = 0.0;  // NaN when diagnostics are disabled
};

struct RunTrace {
  std::vector<TraceRow> rows;
  std::vector<std::string> warnings;
  double runtime_seconds = 0.0;
};

struct RunResult {
  std::vector<AgentState> states;
  RunTrace trace;
  double dual_radius = 0.0;
};

struct RunCallbacks {
  // Called after every round with the post-update states.
  std::function<void(int k, const std::vector<AgentState>&)> on_iteration;
};

// Largest rho1 covered by the convergence guarantee for the given mode.
double theorem_rho1_bound(const ProblemSpec& spec, PerturbationMode mode,
                          double dual_radius);

// lambda = 0, y = f_i(x0), z = g_i(x0), running average seeded at x0.
std::vector<AgentState> init_states(const ProblemSpec& spec,
                                    const SolverConfig& cfg);

// One gossip round: tilde fields become W-mixes of neighbors' y, z, lambda.
void consensus_round(const WeightMatrix& w, std::vector<AgentState>& states,
                     WorkerPool& pool);

// Perturbation points from the current iterate and the tilde snapshots.
void gradient_perturbation(const ProblemSpec& spec, const SolverConfig& cfg,
                           double dual_radius, std::vector<AgentState>& states,
                           WorkerPool& pool);
void proximal_perturbation(const ProblemSpec& spec, const SolverConfig& cfg,
                           double dual_radius, std::vector<AgentState>& states,
                           WorkerPool& pool);

// Projected primal-dual step: x against beta, lambda against g(alpha), both
// anchored at the tilde snapshots where the recursion says so.
void primal_dual_update(const ProblemSpec& spec, const SolverConfig& cfg,
                        double a_k, double dual_radius,
                        std::vector<AgentState>& states, WorkerPool& pool);

// Trackers absorb the increment of the local f and g values.
void auxiliary_update(const ProblemSpec& spec, std::vector<AgentState>& states,
                      WorkerPool& pool);

// Folds the pre-update iterate into the running average with the given
// convex weight (a_k / A_k for the weighted kind, 1/k for the uniform kind).
void running_average_update(double weight, std::vector<AgentState>& states,
                            WorkerPool& pool);

// Centralized view of one round, evaluated before the updates: the averaged
// trackers, the would-be centralized perturbation pair and the saddle
// inequality residual that certifies the perturbation is productive. The
// residual is nonnegative in exact arithmetic whenever rho1 is within the
// theorem bound.
struct CentralizedDiagnostics {
  Vec y_hat, z_hat, lambda_hat;
  std::vector<Vec> alpha_hat;
  Vec beta_hat;
  double residual = 0.0;
};

CentralizedDiagnostics centralized_diagnostics(const ProblemSpec& spec,
                                               const SolverConfig& cfg,
                                               double dual_radius,
                                               const std::vector<AgentState>& states);

// Post-round metrics shared by the solver and the baseline loops.
TraceRow trace_row(const ProblemSpec& spec,
                   const std::vector<AgentState>& states, int k, double a_k,
                   double pert_residual);

// Full consensus-based primal-dual perturbation run.
RunResult run_pdp(const ProblemSpec& spec, const SolverConfig& cfg,
                  const GraphSchedule& schedule,
                  const RunCallbacks& callbacks = {});

}  // namespace pdp
