#include "pdp/problems/sparse.hpp"

#include <random>
#include <sstream>

namespace pdp {

SparseInstance generate_sparse_regression(const SparseParams& params) {
  const int n = params.num_agents;
  const int k = params.primal_dim;
  const int m = params.map_dim;
  if (n < 1 || k < 1 || m < 1 || params.support_per_agent > k) {
    throw Error("generate_sparse_regression: bad dimensions");
  }

  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> mag(0.5, 1.2);
  std::uniform_int_distribution<int> coin(0, 1);

  SparseInstance inst;
  BuiltinProblem& data = inst.problem;
  data.dims = {n, k, m, 1};
  data.name = "sparse regression";

  inst.planted_x.resize(n);
  data.agents.resize(n);
  data.slater_points.resize(n);
  Vec b = Vec::Zero(m);
  double planted_l1 = 0.0;
  for (int i = 0; i < n; ++i) {
    BuiltinAgent& agent = data.agents[i];
    agent.f_matrix = Mat(m, k);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < k; ++c) agent.f_matrix(r, c) = gauss(rng);
    }
    agent.f_matrix /= std::sqrt(static_cast<double>(m));
    agent.box = BoxSet{Vec::Constant(k, -params.box_bound),
                       Vec::Constant(k, params.box_bound)};

    Vec& xstar = inst.planted_x[i];
    xstar = Vec::Zero(k);
    // Support at distinct positions drawn without replacement.
    std::vector<int> idx(k);
    for (int c = 0; c < k; ++c) idx[c] = c;
    for (int s = 0; s < params.support_per_agent; ++s) {
      std::uniform_int_distribution<int> pick(s, k - 1);
      std::swap(idx[s], idx[pick(rng)]);
      xstar[idx[s]] = (coin(rng) ? 1.0 : -1.0) * mag(rng);
    }
    planted_l1 += xstar.lpNorm<1>();
    b += agent.f_matrix * xstar;

    data.slater_points[i] = Vec::Zero(k);
  }
  if (params.noise > 0.0) {
    for (int r = 0; r < m; ++r) b[r] += params.noise * gauss(rng);
  }

  inst.l1_budget = params.l1_budget < 0.0 ? planted_l1 : params.l1_budget;
  for (int i = 0; i < n; ++i) {
    data.agents[i].l1_g = L1Constraint{inst.l1_budget / n};
  }

  data.cost.Q = Mat::Identity(m, m);
  data.cost.q = -2.0 * b;
  data.cost.c = b.squaredNorm();
  data.q_tilde = 0.0;
  data.delta = 1.0;

  std::ostringstream key;
  key << "sparse-n" << n << "-k" << k << "-m" << m << "-seed" << params.seed
      << "-c" << inst.l1_budget;
  data.cache_key = key.str();
  return inst;
}

}  // namespace pdp
