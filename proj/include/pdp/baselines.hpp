#pragma once

#include "pdp/problems/dsm.hpp"
#include "pdp/solver.hpp"

namespace pdp {

enum class BaselineKind {
  CentralizedPD,
  CentralizedPDP,
  DistributedPDNoPerturb,
  DistributedDualSubgradient,
};

// Full-information iterate used by the centralized reference recursions.
struct CentralizedState {
  std::vector<Vec> xs;
  Vec lambda;
};

CentralizedState centralized_init(const ProblemSpec& spec,
                                  const std::vector<Vec>& x0 = {});

// Plain projected primal-dual step: simultaneous gradient step on x against
// lambda, ascent step on lambda against sum_i g_i(x), dual clipped to the
// nonnegative orthant only.
void centralized_pd_step(const ProblemSpec& spec, double a_k,
                         CentralizedState& state);

// Perturbed variant: the primal step sees the dual perturbation point beta
// and the dual step sees g at the primal perturbation point alpha; dual
// quantities live in the ball of the given radius. With rho1 = rho2 = 0 and
// iterates inside the ball this reduces to the plain step.
void centralized_pdp_step(const ProblemSpec& spec, const SolverConfig& cfg,
                          double a_k, double dual_radius,
                          CentralizedState& state);

// Algorithm ablation: the consensus loop with the perturbation switched off
// (alpha_i = x_i, beta_i = mixed lambda). Requires smooth constraints. The
// rho parameters in cfg are ignored.
RunResult distributed_pd_noperturb_run(const ProblemSpec& spec,
                                       const SolverConfig& cfg,
                                       const GraphSchedule& schedule,
                                       const RunCallbacks& callbacks = {});

// Distributed dual subgradient method for the demand-scheduling family,
// using the conjugate form of the two quadratic penalties:
//
//   max_{lambda, eta >= 0} -||lambda||^2/(4 pi_p) - ||eta||^2/(4 pi_s)
//                          + min_x (lambda - eta)^T (sum_i Psi_i x_i - p).
//
// Each customer mixes its dual pair and a tracker of the average constraint
// term over the graph, solves its inner LP exactly over the box (coordinate
// ties resolved toward the lower bound), and takes a projected ascent step.
struct DdsState {
  Vec x, x_prev;
  Vec lambda, eta;
  Vec tracker;  // running estimate of avg_j (Psi_j x_j - p / N)
  Vec x_avg;
};

struct DdsResult {
  std::vector<DdsState> states;
  RunTrace trace;
};

struct DdsCallbacks {
  std::function<void(int k, const std::vector<DdsState>&)> on_iteration;
};

DdsResult dds_run(const DsmInstance& inst, const SolverConfig& cfg,
                  const GraphSchedule& schedule,
                  const DdsCallbacks& callbacks = {});

}  // namespace pdp
