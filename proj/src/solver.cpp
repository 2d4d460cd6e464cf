#include "pdp/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace pdp {
namespace {

double max_agent_g_curvature(const ProblemSpec& spec) {
  double worst = 0.0;
  for (const AgentFunctions& a : spec.agents) {
    worst = std::max(worst, a.g_grad_lipschitz);
  }
  return worst;
}

// Constraint rows entering the primal step. Gradient mode differentiates;
// proximal mode uses the deterministic subgradient selection.
Mat primal_constraint_rows(const AgentFunctions& agent, PerturbationMode mode,
                           const Vec& x) {
  if (mode == PerturbationMode::Gradient) return agent.g_jacobian(x);
  if (agent.g_subgradient) return agent.g_subgradient(x);
  return agent.g_jacobian(x);
}

void check_mode_callbacks(const ProblemSpec& spec, PerturbationMode mode) {
  for (std::size_t i = 0; i < spec.agents.size(); ++i) {
    const AgentFunctions& a = spec.agents[i];
    if (mode == PerturbationMode::Gradient && !a.g_jacobian) {
      throw ModeMismatch("gradient mode needs g_jacobian on agent " +
                         std::to_string(i));
    }
    if (mode == PerturbationMode::Proximal &&
        !(a.g_prox && (a.g_subgradient || a.g_jacobian))) {
      throw ModeMismatch(
          "proximal mode needs g_prox and a subgradient on agent " +
          std::to_string(i));
    }
  }
}

}  // namespace

double theorem_rho1_bound(const ProblemSpec& spec, PerturbationMode mode,
                          double dual_radius) {
  if (mode == PerturbationMode::Proximal) {
    return 1.0 / spec.fbar_grad_lipschitz;
  }
  const double denom =
      spec.fbar_grad_lipschitz +
      dual_radius * std::sqrt(static_cast<double>(spec.dims.constraint_dim)) *
          max_agent_g_curvature(spec);
  return 1.0 / denom;
}

std::vector<AgentState> init_states(const ProblemSpec& spec,
                                    const SolverConfig& cfg) {
  const int n = spec.dims.num_agents;
  const int k = spec.dims.primal_dim;
  const int p = spec.dims.constraint_dim;
  if (!cfg.x0.empty() && static_cast<int>(cfg.x0.size()) != n) {
    throw DimensionMismatch("init_states: x0 must have one block per agent");
  }
  std::vector<AgentState> states(n);
  for (int i = 0; i < n; ++i) {
    const AgentFunctions& a = spec.agents[i];
    Vec x0 = cfg.x0.empty() ? Vec::Zero(k) : cfg.x0[i];
    if (x0.size() != k) {
      throw DimensionMismatch("init_states: x0 block has wrong dimension");
    }
    AgentState& s = states[i];
    s.x = a.project(x0);
    s.x_prev = s.x;
    s.lambda = Vec::Zero(p);
    s.y = a.f(s.x);
    s.z = a.g(s.x);
    if (s.y.size() != spec.dims.map_dim || s.z.size() != p) {
      throw DimensionMismatch("init_states: f or g returned wrong dimension");
    }
    s.y_tilde = s.y;
    s.z_tilde = s.z;
    s.lambda_tilde = s.lambda;
    s.alpha = s.x;
    s.beta = s.lambda;
    s.x_avg = s.x;
  }
  return states;
}

void consensus_round(const WeightMatrix& w, std::vector<AgentState>& states,
                     WorkerPool& pool) {
  const int n = static_cast<int>(states.size());
  if (w.size() != n) {
    throw DimensionMismatch("consensus_round: matrix size != agent count");
  }
  pool.parallel_for(n, [&](int i) {
    AgentState& s = states[i];
    Vec y = w.w(i, 0) * states[0].y;
    Vec z = w.w(i, 0) * states[0].z;
    Vec l = w.w(i, 0) * states[0].lambda;
    for (int j = 1; j < n; ++j) {
      const double wij = w.w(i, j);
      if (wij == 0.0) continue;
      y.noalias() += wij * states[j].y;
      z.noalias() += wij * states[j].z;
      l.noalias() += wij * states[j].lambda;
    }
    s.y_tilde = std::move(y);
    s.z_tilde = std::move(z);
    s.lambda_tilde = std::move(l);
  });
}

void gradient_perturbation(const ProblemSpec& spec, const SolverConfig& cfg,
                           double dual_radius, std::vector<AgentState>& states,
                           WorkerPool& pool) {
  const double n = static_cast<double>(spec.dims.num_agents);
  pool.parallel_for(static_cast<int>(states.size()), [&](int i) {
    const AgentFunctions& a = spec.agents[i];
    AgentState& s = states[i];
    if (!a.g_jacobian) {
      throw ModeMismatch("gradient_perturbation: agent lacks g_jacobian");
    }
    const Vec w = spec.cost.grad(n * s.y_tilde);
    const Vec dir = primal_direction(a, s.x, w, a.g_jacobian(s.x), s.lambda_tilde);
    s.alpha = a.project(s.x - cfg.rho1 * dir);
    s.beta = project_dual_ball(s.lambda_tilde + cfg.rho2 * (n * s.z_tilde),
                               dual_radius);
  });
}

void proximal_perturbation(const ProblemSpec& spec, const SolverConfig& cfg,
                           double dual_radius, std::vector<AgentState>& states,
                           WorkerPool& pool) {
  const double n = static_cast<double>(spec.dims.num_agents);
  pool.parallel_for(static_cast<int>(states.size()), [&](int i) {
    const AgentFunctions& a = spec.agents[i];
    AgentState& s = states[i];
    if (!a.g_prox) {
      throw ModeMismatch("proximal_perturbation: agent lacks g_prox");
    }
    const Vec w = spec.cost.grad(n * s.y_tilde);
    const Vec v = s.x - cfg.rho1 * (a.f_jacobian(s.x).transpose() * w);
    s.alpha = a.g_prox(v, s.lambda_tilde, cfg.rho1);
    s.beta = project_dual_ball(s.lambda_tilde + cfg.rho2 * (n * s.z_tilde),
                               dual_radius);
  });
}

void primal_dual_update(const ProblemSpec& spec, const SolverConfig& cfg,
                        double a_k, double dual_radius,
                        std::vector<AgentState>& states, WorkerPool& pool) {
  const double n = static_cast<double>(spec.dims.num_agents);
  pool.parallel_for(static_cast<int>(states.size()), [&](int i) {
    const AgentFunctions& a = spec.agents[i];
    AgentState& s = states[i];
    const Vec w = spec.cost.grad(n * s.y_tilde);
    const Mat rows = primal_constraint_rows(a, cfg.mode, s.x);
    const Vec dir = primal_direction(a, s.x, w, rows, s.beta);
    s.x_prev = s.x;
    s.x = a.project(s.x_prev - a_k * dir);
    s.lambda = project_dual_ball(s.lambda_tilde + a_k * a.g(s.alpha),
                                 dual_radius);
  });
}

void auxiliary_update(const ProblemSpec& spec, std::vector<AgentState>& states,
                      WorkerPool& pool) {
  pool.parallel_for(static_cast<int>(states.size()), [&](int i) {
    const AgentFunctions& a = spec.agents[i];
    AgentState& s = states[i];
    s.y = s.y_tilde + (a.f(s.x) - a.f(s.x_prev));
    s.z = s.z_tilde + (a.g(s.x) - a.g(s.x_prev));
  });
}

void running_average_update(double weight, std::vector<AgentState>& states,
                            WorkerPool& pool) {
  pool.parallel_for(static_cast<int>(states.size()), [&](int i) {
    AgentState& s = states[i];
    s.x_avg += weight * (s.x_prev - s.x_avg);
  });
}

CentralizedDiagnostics centralized_diagnostics(
    const ProblemSpec& spec, const SolverConfig& cfg, double dual_radius,
    const std::vector<AgentState>& states) {
  const int n = spec.dims.num_agents;
  const double nd = static_cast<double>(n);
  CentralizedDiagnostics d;
  d.y_hat = Vec::Zero(spec.dims.map_dim);
  d.z_hat = Vec::Zero(spec.dims.constraint_dim);
  d.lambda_hat = Vec::Zero(spec.dims.constraint_dim);
  for (int i = 0; i < n; ++i) {
    d.y_hat += spec.agents[i].f(states[i].x);
    d.z_hat += spec.agents[i].g(states[i].x);
    d.lambda_hat += states[i].lambda;
  }
  d.y_hat /= nd;
  d.z_hat /= nd;
  d.lambda_hat /= nd;

  d.beta_hat = project_dual_ball(d.lambda_hat + cfg.rho2 * (nd * d.z_hat),
                                 dual_radius);
  const Vec w = spec.cost.grad(nd * d.y_hat);
  d.alpha_hat.resize(n);
  double dist_x2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const AgentFunctions& a = spec.agents[i];
    const Vec& x = states[i].x;
    if (cfg.mode == PerturbationMode::Gradient) {
      const Vec dir = primal_direction(a, x, w, a.g_jacobian(x), d.lambda_hat);
      d.alpha_hat[i] = a.project(x - cfg.rho1 * dir);
    } else {
      const Vec v = x - cfg.rho1 * (a.f_jacobian(x).transpose() * w);
      d.alpha_hat[i] = a.g_prox(v, d.lambda_hat, cfg.rho1);
    }
    dist_x2 += (x - d.alpha_hat[i]).squaredNorm();
  }

  std::vector<Vec> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = states[i].x;
  const double lhs = eval_lagrangian(spec, xs, d.beta_hat) -
                     eval_lagrangian(spec, d.alpha_hat, d.lambda_hat);
  const double coef_x =
      cfg.mode == PerturbationMode::Gradient
          ? 1.0 / cfg.rho1 -
                (spec.fbar_grad_lipschitz +
                 dual_radius *
                     std::sqrt(static_cast<double>(spec.dims.constraint_dim)) *
                     max_agent_g_curvature(spec))
          : 0.5 / cfg.rho1 - 0.5 * spec.fbar_grad_lipschitz;
  const double dist_l2 = (d.lambda_hat - d.beta_hat).squaredNorm();
  d.residual = lhs - coef_x * dist_x2 - dist_l2 / cfg.rho2;
  return d;
}

TraceRow trace_row(const ProblemSpec& spec,
                   const std::vector<AgentState>& states, int k, double a_k,
                   double pert_residual) {
  const int n = spec.dims.num_agents;
  TraceRow row;
  row.k = k;
  row.a_k = a_k;
  std::vector<Vec> x_avg(n), x_now(n);
  Vec lambda_mean = Vec::Zero(spec.dims.constraint_dim);
  Vec y_mean = Vec::Zero(spec.dims.map_dim);
  Vec z_mean = Vec::Zero(spec.dims.constraint_dim);
  for (int i = 0; i < n; ++i) {
    x_avg[i] = states[i].x_avg;
    x_now[i] = states[i].x;
    lambda_mean += states[i].lambda;
    y_mean += states[i].y;
    z_mean += states[i].z;
  }
  lambda_mean /= static_cast<double>(n);
  y_mean /= static_cast<double>(n);
  z_mean /= static_cast<double>(n);
  row.obj_avg = objective(spec, x_avg);
  row.obj_raw = objective(spec, x_now);
  const Vec g_avg = sum_g(spec, x_avg);
  row.viol = g_avg.cwiseMax(0.0).norm();
  row.compl_slack = std::abs(lambda_mean.dot(g_avg));
  double d_l = 0.0, d_y = 0.0, d_z = 0.0;
  for (int i = 0; i < n; ++i) {
    d_l = std::max(d_l, (states[i].lambda - lambda_mean).norm());
    d_y = std::max(d_y, (states[i].y - y_mean).norm());
    d_z = std::max(d_z, (states[i].z - z_mean).norm());
  }
  row.dual_disagree = d_l;
  row.y_disagree = d_y;
  row.z_disagree = d_z;
  row.pert_residual = pert_residual;
  return row;
}

RunResult run_pdp(const ProblemSpec& spec, const SolverConfig& cfg,
                  const GraphSchedule& schedule, const RunCallbacks& callbacks) {
  const int n = spec.dims.num_agents;
  if (schedule.num_nodes() != n) {
    throw DimensionMismatch("run_pdp: schedule size != number of agents");
  }
  if (cfg.rho1 <= 0.0 || cfg.rho2 <= 0.0) {
    throw ConfigError("run_pdp: rho1 and rho2 must be positive");
  }
  if (cfg.max_iters < 1) throw ConfigError("run_pdp: max_iters must be >= 1");
  if (cfg.step.a <= 0.0 || cfg.step.b < 0.0) {
    throw ConfigError("run_pdp: step sizes must satisfy a > 0, b >= 0");
  }
  check_mode_callbacks(spec, cfg.mode);

  RunResult out;
  out.dual_radius =
      cfg.dual_radius > 0.0 ? cfg.dual_radius : dual_ball_radius(spec);

  const double rho1_limit = theorem_rho1_bound(spec, cfg.mode, out.dual_radius);
  if (cfg.rho1 > rho1_limit) {
    std::ostringstream msg;
    msg << "rho1 = " << cfg.rho1 << " exceeds the theorem bound "
        << rho1_limit << "; convergence is not guaranteed";
    out.trace.warnings.push_back(msg.str());
  }

  WorkerPool pool(cfg.workers);
  out.states = init_states(spec, cfg);
  out.trace.rows.reserve(cfg.max_iters);

  const auto t0 = std::chrono::steady_clock::now();
  double step_mass = 0.0;  // A_k, running sum of the a_l
  for (int k = 1; k <= cfg.max_iters; ++k) {
    const WeightMatrix w = schedule.at(k);
    consensus_round(w, out.states, pool);

    double pert_residual = std::numeric_limits<double>::quiet_NaN();
    if (cfg.diagnostics) {
      pert_residual =
          centralized_diagnostics(spec, cfg, out.dual_radius, out.states)
              .residual;
    }

    if (cfg.mode == PerturbationMode::Gradient) {
      gradient_perturbation(spec, cfg, out.dual_radius, out.states, pool);
    } else {
      proximal_perturbation(spec, cfg, out.dual_radius, out.states, pool);
    }

    const double a_k = cfg.step.at(k);
    step_mass += a_k;
    const double avg_weight =
        cfg.average == AverageKind::Weighted ? a_k / step_mass : 1.0 / k;

    primal_dual_update(spec, cfg, a_k, out.dual_radius, out.states, pool);
    auxiliary_update(spec, out.states, pool);
    running_average_update(avg_weight, out.states, pool);

    out.trace.rows.push_back(trace_row(spec, out.states, k, a_k, pert_residual));

    if (callbacks.on_iteration) callbacks.on_iteration(k, out.states);
  }
  out.trace.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace pdp
