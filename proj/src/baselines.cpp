#include "pdp/baselines.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "pdp/projections.hpp"

namespace pdp {
namespace {

void require_smooth_constraints(const ProblemSpec& spec, const char* who) {
  for (std::size_t i = 0; i < spec.agents.size(); ++i) {
    if (!spec.agents[i].g_jacobian) {
      throw ModeMismatch(std::string(who) + ": agent " + std::to_string(i) +
                         " has no g_jacobian; this method needs smooth "
                         "constraints");
    }
  }
}

}  // namespace

CentralizedState centralized_init(const ProblemSpec& spec,
                                  const std::vector<Vec>& x0) {
  const int n = spec.dims.num_agents;
  if (!x0.empty() && static_cast<int>(x0.size()) != n) {
    throw DimensionMismatch("centralized_init: x0 must have one block per agent");
  }
  CentralizedState st;
  st.xs.resize(n);
  for (int i = 0; i < n; ++i) {
    Vec seed = x0.empty() ? Vec::Zero(spec.dims.primal_dim) : x0[i];
    if (seed.size() != spec.dims.primal_dim) {
      throw DimensionMismatch("centralized_init: x0 block has wrong dimension");
    }
    st.xs[i] = spec.agents[i].project(seed);
  }
  st.lambda = Vec::Zero(spec.dims.constraint_dim);
  return st;
}

void centralized_pd_step(const ProblemSpec& spec, double a_k,
                         CentralizedState& state) {
  require_smooth_constraints(spec, "centralized_pd_step");
  const int n = spec.dims.num_agents;
  const Vec w = spec.cost.grad(sum_f(spec, state.xs));
  const Vec sg = sum_g(spec, state.xs);
  std::vector<Vec> next(n);
  for (int i = 0; i < n; ++i) {
    const AgentFunctions& a = spec.agents[i];
    const Vec& x = state.xs[i];
    const Vec dir = primal_direction(a, x, w, a.g_jacobian(x), state.lambda);
    next[i] = a.project(x - a_k * dir);
  }
  state.lambda = project_nonneg(state.lambda + a_k * sg);
  state.xs = std::move(next);
}

void centralized_pdp_step(const ProblemSpec& spec, const SolverConfig& cfg,
                          double a_k, double dual_radius,
                          CentralizedState& state) {
  const int n = spec.dims.num_agents;
  const Vec w = spec.cost.grad(sum_f(spec, state.xs));
  const Vec sg = sum_g(spec, state.xs);

  // Perturbation points, both computed from the pre-step iterate.
  std::vector<Vec> alpha(n);
  for (int i = 0; i < n; ++i) {
    const AgentFunctions& a = spec.agents[i];
    const Vec& x = state.xs[i];
    if (cfg.mode == PerturbationMode::Gradient) {
      if (!a.g_jacobian) {
        throw ModeMismatch("centralized_pdp_step: agent lacks g_jacobian");
      }
      const Vec dir = primal_direction(a, x, w, a.g_jacobian(x), state.lambda);
      alpha[i] = a.project(x - cfg.rho1 * dir);
    } else {
      if (!a.g_prox) {
        throw ModeMismatch("centralized_pdp_step: agent lacks g_prox");
      }
      const Vec v = x - cfg.rho1 * (a.f_jacobian(x).transpose() * w);
      alpha[i] = a.g_prox(v, state.lambda, cfg.rho1);
    }
  }
  const Vec beta =
      project_dual_ball(state.lambda + cfg.rho2 * sg, dual_radius);

  std::vector<Vec> next(n);
  for (int i = 0; i < n; ++i) {
    const AgentFunctions& a = spec.agents[i];
    const Vec& x = state.xs[i];
    Mat rows;
    if (cfg.mode == PerturbationMode::Gradient) {
      rows = a.g_jacobian(x);
    } else {
      rows = a.g_subgradient ? a.g_subgradient(x) : a.g_jacobian(x);
    }
    const Vec dir = primal_direction(a, x, w, rows, beta);
    next[i] = a.project(x - a_k * dir);
  }
  state.lambda = project_dual_ball(state.lambda + a_k * sum_g(spec, alpha),
                                   dual_radius);
  state.xs = std::move(next);
}

RunResult distributed_pd_noperturb_run(const ProblemSpec& spec,
                                       const SolverConfig& cfg,
                                       const GraphSchedule& schedule,
                                       const RunCallbacks& callbacks) {
  const int n = spec.dims.num_agents;
  if (schedule.num_nodes() != n) {
    throw DimensionMismatch(
        "distributed_pd_noperturb_run: schedule size != number of agents");
  }
  if (cfg.max_iters < 1) {
    throw ConfigError("distributed_pd_noperturb_run: max_iters must be >= 1");
  }
  if (cfg.step.a <= 0.0 || cfg.step.b < 0.0) {
    throw ConfigError(
        "distributed_pd_noperturb_run: step sizes must satisfy a > 0, b >= 0");
  }
  require_smooth_constraints(spec, "distributed_pd_noperturb_run");

  // The perturbation is bypassed, so rho plays no role; pin the mode so the
  // shared update kernel differentiates the constraints.
  SolverConfig local = cfg;
  local.mode = PerturbationMode::Gradient;

  RunResult out;
  out.dual_radius =
      cfg.dual_radius > 0.0 ? cfg.dual_radius : dual_ball_radius(spec);

  WorkerPool pool(cfg.workers);
  out.states = init_states(spec, local);
  out.trace.rows.reserve(cfg.max_iters);

  const auto t0 = std::chrono::steady_clock::now();
  double step_mass = 0.0;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    const WeightMatrix w = schedule.at(k);
    consensus_round(w, out.states, pool);

    pool.parallel_for(n, [&](int i) {
      AgentState& s = out.states[i];
      s.alpha = s.x;
      s.beta = s.lambda_tilde;
    });

    const double a_k = cfg.step.at(k);
    step_mass += a_k;
    const double avg_weight =
        cfg.average == AverageKind::Weighted ? a_k / step_mass : 1.0 / k;

    primal_dual_update(spec, local, a_k, out.dual_radius, out.states, pool);
    auxiliary_update(spec, out.states, pool);
    running_average_update(avg_weight, out.states, pool);

    out.trace.rows.push_back(
        trace_row(spec, out.states, k, a_k,
                  std::numeric_limits<double>::quiet_NaN()));
    if (callbacks.on_iteration) callbacks.on_iteration(k, out.states);
  }
  out.trace.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

namespace {

// Exact minimizer of c^T x over the scheduling box; ties go to the lower
// bound so the selection is deterministic.
Vec box_linear_argmin(const Vec& c, const Vec& lo, const Vec& hi) {
  Vec x(c.size());
  for (int j = 0; j < c.size(); ++j) {
    x[j] = c[j] < 0.0 ? hi[j] : lo[j];
  }
  return x;
}

}  // namespace

DdsResult dds_run(const DsmInstance& inst, const SolverConfig& cfg,
                  const GraphSchedule& schedule, const DdsCallbacks& callbacks) {
  const int n = inst.num_customers;
  const int t = inst.horizon;
  if (schedule.num_nodes() != n) {
    throw DimensionMismatch("dds_run: schedule size != number of customers");
  }
  if (cfg.max_iters < 1) throw ConfigError("dds_run: max_iters must be >= 1");
  if (cfg.step.a <= 0.0 || cfg.step.b < 0.0) {
    throw ConfigError("dds_run: step sizes must satisfy a > 0, b >= 0");
  }
  if (inst.pi_p <= 0.0 || inst.pi_s <= 0.0) {
    throw ConfigError("dds_run: conjugate form needs pi_p > 0 and pi_s > 0");
  }

  const double nd = static_cast<double>(n);
  const Vec share = inst.bid / nd;

  DdsResult out;
  out.states.resize(n);
  for (int i = 0; i < n; ++i) {
    DdsState& s = out.states[i];
    s.x = box_linear_argmin(Vec::Zero(inst.lo[i].size()), inst.lo[i],
                            inst.hi[i]);
    s.x_prev = s.x;
    s.lambda = Vec::Zero(t);
    s.eta = Vec::Zero(t);
    s.tracker = inst.psi[i] * s.x - share;
    s.x_avg = s.x;
  }
  out.trace.rows.reserve(cfg.max_iters);

  std::vector<Vec> lam(n), eta(n), trk(n);
  const auto t0 = std::chrono::steady_clock::now();
  double step_mass = 0.0;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    const WeightMatrix w = schedule.at(k);
    for (int i = 0; i < n; ++i) {
      lam[i] = out.states[i].lambda;
      eta[i] = out.states[i].eta;
      trk[i] = out.states[i].tracker;
    }
    const std::vector<Vec> lam_t = mix(w, lam);
    const std::vector<Vec> eta_t = mix(w, eta);
    const std::vector<Vec> trk_t = mix(w, trk);

    const double a_k = cfg.step.at(k);
    step_mass += a_k;
    const double avg_weight =
        cfg.average == AverageKind::Weighted ? a_k / step_mass : 1.0 / k;

    for (int i = 0; i < n; ++i) {
      DdsState& s = out.states[i];
      // Inner minimization of (lambda - eta)^T Psi_i x over the box.
      const Vec price = lam_t[i] - eta_t[i];
      const Vec c = inst.psi[i].transpose() * price;
      s.x_prev = s.x;
      s.x = box_linear_argmin(c, inst.lo[i], inst.hi[i]);

      // Projected ascent on the concave dual; the tracker estimates the
      // network-average constraint term, so the gradient scales it by n.
      s.lambda = project_nonneg(
          lam_t[i] +
          a_k * (nd * trk_t[i] - lam_t[i] / (2.0 * inst.pi_p)));
      s.eta = project_nonneg(
          eta_t[i] +
          a_k * (-nd * trk_t[i] - eta_t[i] / (2.0 * inst.pi_s)));

      s.tracker =
          trk_t[i] + inst.psi[i] * (s.x - s.x_prev);
      s.x_avg += avg_weight * (s.x - s.x_avg);
    }

    TraceRow row;
    row.k = k;
    row.a_k = a_k;
    std::vector<Vec> x_avg(n), x_now(n);
    Vec lam_mean = Vec::Zero(t);
    Vec eta_mean = Vec::Zero(t);
    Vec trk_mean = Vec::Zero(t);
    for (int i = 0; i < n; ++i) {
      x_avg[i] = out.states[i].x_avg;
      x_now[i] = out.states[i].x;
      lam_mean += out.states[i].lambda;
      eta_mean += out.states[i].eta;
      trk_mean += out.states[i].tracker;
    }
    lam_mean /= nd;
    eta_mean /= nd;
    trk_mean /= nd;
    row.obj_avg = inst.cost(x_avg);
    row.obj_raw = inst.cost(x_now);
    // The scheduling problem itself is unconstrained after the penalty
    // reformulation, so feasibility violation is identically zero; report
    // complementarity against the negative part of the supply residual,
    // which is the slack-optimal constraint value.
    row.viol = 0.0;
    const Vec resid = inst.aggregate(x_avg) - inst.bid;
    row.compl_slack = std::abs(lam_mean.dot(resid.cwiseMin(0.0)));
    double d_l = 0.0, d_z = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dl = (out.states[i].lambda - lam_mean).norm();
      const double de = (out.states[i].eta - eta_mean).norm();
      d_l = std::max(d_l, std::hypot(dl, de));
      d_z = std::max(d_z, (out.states[i].tracker - trk_mean).norm());
    }
    row.dual_disagree = d_l;
    row.y_disagree = 0.0;
    row.z_disagree = d_z;
    row.pert_residual = std::numeric_limits<double>::quiet_NaN();
    out.trace.rows.push_back(row);

    if (callbacks.on_iteration) callbacks.on_iteration(k, out.states);
  }
  out.trace.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

}  // namespace pdp
