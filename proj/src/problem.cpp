#include "pdp/problem.hpp"

namespace pdp {

Vec stack(const std::vector<Vec>& blocks) {
  Eigen::Index total = 0;
  for (const Vec& b : blocks) total += b.size();
  Vec out(total);
  Eigen::Index at = 0;
  for (const Vec& b : blocks) {
    out.segment(at, b.size()) = b;
    at += b.size();
  }
  return out;
}

std::vector<Vec> unstack(const ProblemSpec& spec, const Vec& x) {
  const int n = spec.dims.num_agents;
  const int k = spec.dims.primal_dim;
  if (x.size() != static_cast<Eigen::Index>(n) * k) {
    throw DimensionMismatch("unstack: stacked vector has wrong length");
  }
  std::vector<Vec> blocks(n);
  for (int i = 0; i < n; ++i) blocks[i] = x.segment(i * k, k);
  return blocks;
}

Vec sum_f(const ProblemSpec& spec, const std::vector<Vec>& xs) {
  Vec s = Vec::Zero(spec.dims.map_dim);
  for (int i = 0; i < spec.dims.num_agents; ++i) {
    Vec fi = spec.agents[i].f(xs[i]);
    if (fi.size() != spec.dims.map_dim) {
      throw DimensionMismatch("sum_f: f_i returned wrong dimension");
    }
    s += fi;
  }
  return s;
}

Vec sum_g(const ProblemSpec& spec, const std::vector<Vec>& xs) {
  Vec s = Vec::Zero(spec.dims.constraint_dim);
  for (int i = 0; i < spec.dims.num_agents; ++i) {
    Vec gi = spec.agents[i].g(xs[i]);
    if (gi.size() != spec.dims.constraint_dim) {
      throw DimensionMismatch("sum_g: g_i returned wrong dimension");
    }
    s += gi;
  }
  return s;
}

double objective(const ProblemSpec& spec, const std::vector<Vec>& xs) {
  return spec.cost.eval(sum_f(spec, xs));
}

double eval_lagrangian(const ProblemSpec& spec, const std::vector<Vec>& xs,
                       const Vec& lambda) {
  if (lambda.size() != spec.dims.constraint_dim) {
    throw DimensionMismatch("eval_lagrangian: multiplier has wrong dimension");
  }
  return objective(spec, xs) + lambda.dot(sum_g(spec, xs));
}

double eval_lagrangian(const ProblemSpec& spec, const Vec& x, const Vec& lambda) {
  return eval_lagrangian(spec, unstack(spec, x), lambda);
}

double dual_ball_radius(const SlaterCertificate& cert, double objective_at_slater) {
  if (cert.gamma <= 0.0) {
    throw NonPositiveGamma("dual_ball_radius: gamma must be positive");
  }
  if (cert.slack_margin <= 0.0) {
    throw NonPositiveGamma("dual_ball_radius: slack margin must be positive");
  }
  return (objective_at_slater - cert.q_tilde) / cert.gamma + cert.slack_margin;
}

double dual_ball_radius(const ProblemSpec& spec) {
  return dual_ball_radius(spec.slater, objective(spec, spec.slater.points));
}

double slater_margin(const ProblemSpec& spec) {
  if (static_cast<int>(spec.slater.points.size()) != spec.dims.num_agents) {
    throw DimensionMismatch("slater_margin: certificate has wrong agent count");
  }
  const Vec total = sum_g(spec, spec.slater.points);
  return -total.maxCoeff();
}

Vec primal_direction(const AgentFunctions& agent, const Vec& x, const Vec& w,
                     const Mat& constraint_rows, const Vec& mu) {
  Vec dir = agent.f_jacobian(x).transpose() * w;
  dir.noalias() += constraint_rows.transpose() * mu;
  return dir;
}

Mat constraint_rows_at(const AgentFunctions& agent, const Vec& x) {
  if (agent.g_jacobian) return agent.g_jacobian(x);
  if (agent.g_subgradient) return agent.g_subgradient(x);
  throw ModeMismatch("agent provides neither constraint Jacobian nor subgradient");
}

}  // namespace pdp
