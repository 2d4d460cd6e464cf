#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "pdp/baselines.hpp"
#include "pdp/problems/qp.hpp"
#include "pdp/problems/sparse.hpp"

using namespace pdp;

namespace {

GraphSchedule complete_schedule(int n) {
  return GraphSchedule::fixed(metropolis_weights(complete_adjacency(n)));
}

Vec box_lp_argmin(const Vec& c, const Vec& lo, const Vec& hi) {
  Vec x(c.size());
  for (int j = 0; j < c.size(); ++j) x[j] = c[j] < 0.0 ? hi[j] : lo[j];
  return x;
}

}  // namespace

TEST_CASE("centralized init projects the seed into the local sets") {
  const ProblemSpec spec = to_spec(random_qp({3, 2, 2, 9}).problem);

  const CentralizedState fresh = centralized_init(spec);
  CHECK(fresh.lambda.norm() == 0.0);
  for (const Vec& x : fresh.xs) CHECK(x.norm() == 0.0);  // 0 is interior

  std::vector<Vec> x0(3, Vec::Constant(2, 9.0));  // clamps to the unit box
  const CentralizedState seeded = centralized_init(spec, x0);
  for (const Vec& x : seeded.xs) {
    CHECK((x - Vec::Constant(2, 1.0)).norm() < 1e-15);
  }

  x0.pop_back();
  CHECK_THROWS_AS(centralized_init(spec, x0), DimensionMismatch);
}

TEST_CASE("centralized primal-dual converges on a planted instance") {
  const QpInstance inst = random_qp({5, 2, 2, 1});
  const ProblemSpec spec = to_spec(inst.problem);

  CentralizedState state = centralized_init(spec);
  StepSchedule step{1.0, 10.0};
  std::vector<Vec> mean = state.xs;
  for (int k = 1; k <= 20000; ++k) {
    for (int i = 0; i < 5; ++i) {
      mean[i] += (state.xs[i] - mean[i]) / k;
    }
    centralized_pd_step(spec, step.at(k), state);
  }

  // The raw iterate contracts all the way to the planted point; the mean
  // drags the cold-start transient at 1/k and lands a few orders higher.
  const double denom = std::max(1.0, std::abs(inst.planted_value));
  CHECK(std::abs(objective(spec, state.xs) - inst.planted_value) / denom <
        1e-9);
  CHECK(sum_g(spec, state.xs).cwiseMax(0.0).norm() < 1e-9);
  CHECK(std::abs(objective(spec, mean) - inst.planted_value) / denom < 1e-3);
  CHECK(sum_g(spec, mean).cwiseMax(0.0).norm() < 1e-3);
}

TEST_CASE("zero perturbation weights recover the plain recursion") {
  const ProblemSpec spec = to_spec(random_qp({4, 2, 3, 7}).problem);

  SolverConfig cfg;
  cfg.rho1 = 0.0;
  cfg.rho2 = 0.0;
  const double huge_radius = 1e9;  // ball clipping never engages

  CentralizedState pd = centralized_init(spec);
  CentralizedState pdp = centralized_init(spec);
  StepSchedule step{1.0, 10.0};
  for (int k = 1; k <= 100; ++k) {
    centralized_pd_step(spec, step.at(k), pd);
    centralized_pdp_step(spec, cfg, step.at(k), huge_radius, pdp);
    for (int i = 0; i < 4; ++i) {
      CHECK((pd.xs[i] - pdp.xs[i]).norm() < 1e-15);
    }
    CHECK((pd.lambda - pdp.lambda).norm() < 1e-15);
  }
}

TEST_CASE("the unperturbed distributed loop rejects nonsmooth constraints") {
  const SparseInstance inst =
      generate_sparse_regression({3, 4, 8, 1, 2.0, 0.0, -1.0, 6});
  CHECK_THROWS_AS(distributed_pd_noperturb_run(to_spec(inst.problem),
                                               SolverConfig{},
                                               complete_schedule(3)),
                  ModeMismatch);
}

TEST_CASE("the unperturbed distributed loop runs without diagnostics") {
  const ProblemSpec spec = to_spec(random_qp({4, 2, 2, 2}).problem);
  SolverConfig cfg;
  cfg.max_iters = 50;

  const RunResult run =
      distributed_pd_noperturb_run(spec, cfg, complete_schedule(4));
  REQUIRE(static_cast<int>(run.trace.rows.size()) == 50);
  for (const TraceRow& row : run.trace.rows) {
    CHECK(std::isnan(row.pert_residual));
  }
  for (const AgentState& s : run.states) {
    CHECK(s.x.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);  // stays in the box
    CHECK(s.lambda.minCoeff() >= 0.0);
  }
}

TEST_CASE("dual subgradient opens with the all-lower-bound schedule") {
  const DsmInstance inst = generate_dsm({4, 6, 3});
  SolverConfig cfg;
  cfg.max_iters = 1;

  std::vector<DdsState> seen;
  DdsCallbacks cb;
  cb.on_iteration = [&](int, const std::vector<DdsState>& states) {
    seen = states;
  };
  dds_run(inst, cfg, complete_schedule(4), cb);

  REQUIRE(static_cast<int>(seen.size()) == 4);
  for (int i = 0; i < 4; ++i) {
    // Zero prices price every appliance at zero, and ties go to the lower
    // bound, so both the starting point and the first iterate sit at lo.
    CHECK((seen[i].x_prev - inst.lo[i]).norm() == 0.0);
    CHECK((seen[i].x - inst.lo[i]).norm() == 0.0);
  }
}

TEST_CASE("dual subgradient keeps multipliers in the orthant and tracks the "
          "constraint mean") {
  const DsmInstance inst = generate_dsm({5, 8, 2});
  SolverConfig cfg;
  cfg.step = {0.05, 10.0};
  cfg.max_iters = 60;

  const double n = 5.0;
  double worst = 0.0;
  DdsCallbacks cb;
  cb.on_iteration = [&](int, const std::vector<DdsState>& states) {
    Vec trk_mean = Vec::Zero(inst.horizon);
    Vec ref_mean = Vec::Zero(inst.horizon);
    for (int i = 0; i < 5; ++i) {
      CHECK(states[i].lambda.minCoeff() >= 0.0);
      CHECK(states[i].eta.minCoeff() >= 0.0);
      trk_mean += states[i].tracker;
      ref_mean += inst.psi[i] * states[i].x - inst.bid / n;
    }
    worst = std::max(worst, (trk_mean - ref_mean).norm() /
                                std::max(1.0, ref_mean.norm()));
  };
  dds_run(inst, cfg, GraphSchedule::random(5, 0.7, 4, 3), cb);
  CHECK(worst < 1e-10);
}

TEST_CASE("dual subgradient inner step solves its box linear program") {
  const DsmInstance inst = generate_dsm({1, 5, 9});
  SolverConfig cfg;
  cfg.step = {0.1, 10.0};
  cfg.max_iters = 40;

  // With one customer the mixing step is the identity, so the price that
  // produced x(k) is exactly the multiplier pair from round k - 1.
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec lam_prev = Vec::Zero(inst.horizon);
  Vec eta_prev = Vec::Zero(inst.horizon);
  DdsCallbacks cb;
  cb.on_iteration = [&](int, const std::vector<DdsState>& states) {
    const Vec c = inst.psi[0].transpose() * (lam_prev - eta_prev);
    const double achieved = c.dot(states[0].x);
    CHECK(achieved <=
          c.dot(box_lp_argmin(c, inst.lo[0], inst.hi[0])) + 1e-12);
    for (int trial = 0; trial < 50; ++trial) {
      Vec z(inst.horizon);
      for (int j = 0; j < inst.horizon; ++j) {
        z[j] = inst.lo[0][j] + u(rng) * (inst.hi[0][j] - inst.lo[0][j]);
      }
      CHECK(achieved <= c.dot(z) + 1e-12);
    }
    lam_prev = states[0].lambda;
    eta_prev = states[0].eta;
  };
  dds_run(inst, cfg, complete_schedule(1), cb);
}

TEST_CASE("dual subgradient trace reports the penalty objective") {
  const DsmInstance inst = generate_dsm({4, 6, 5});
  SolverConfig cfg;
  cfg.step = {0.05, 10.0};
  cfg.max_iters = 120;

  const DdsResult run = dds_run(inst, cfg, complete_schedule(4));
  REQUIRE(static_cast<int>(run.trace.rows.size()) == 120);
  std::vector<Vec> x_avg(4);
  for (int i = 0; i < 4; ++i) x_avg[i] = run.states[i].x_avg;
  CHECK(run.trace.rows.back().obj_avg ==
        doctest::Approx(inst.cost(x_avg)).epsilon(1e-12));
  CHECK(run.trace.rows.back().viol == 0.0);

  // The scheduling cost should drop from the uncoordinated start.
  CHECK(run.trace.rows.back().obj_avg < run.trace.rows.front().obj_avg);
}

TEST_CASE("dual subgradient validates its configuration") {
  const DsmInstance inst = generate_dsm({3, 5, 1});
  SolverConfig cfg;
  CHECK_THROWS_AS(dds_run(inst, cfg, complete_schedule(4)),
                  DimensionMismatch);
  cfg.max_iters = 0;
  CHECK_THROWS_AS(dds_run(inst, cfg, complete_schedule(3)), ConfigError);

  DsmInstance broken = inst;
  broken.pi_p = 0.0;
  cfg.max_iters = 5;
  CHECK_THROWS_AS(dds_run(broken, cfg, complete_schedule(3)), ConfigError);
}
