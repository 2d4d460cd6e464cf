#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "pdp/oracle.hpp"
#include "pdp/problems/dsm.hpp"
#include "pdp/problems/qp.hpp"
#include "pdp/problems/sparse.hpp"

using namespace pdp;

namespace {

// Two scalar agents, F(u) = u^2 with u = x_1 + x_2, coupled row
// x_1 + x_2 + 0.6 <= 0, unit boxes. The optimum presses the constraint:
// value 0.36 on the line x_1 + x_2 = -0.6 with multiplier 1.2.
BuiltinProblem boundary_pair() {
  BuiltinProblem data;
  data.dims = {2, 1, 1, 1};
  data.cost.Q = Mat::Identity(1, 1);
  data.cost.q = Vec::Zero(1);
  data.agents.resize(2);
  data.slater_points.resize(2);
  for (int i = 0; i < 2; ++i) {
    BuiltinAgent& agent = data.agents[i];
    agent.f_matrix = Mat::Identity(1, 1);
    agent.affine_g = AffineConstraint{Mat::Identity(1, 1),
                                      Vec::Constant(1, 0.3)};
    agent.box = BoxSet{Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)};
    data.slater_points[i] = Vec::Constant(1, -0.9);
  }
  return data;
}

}  // namespace

TEST_CASE("grid search finds the boundary optimum with lexicographic ties") {
  const ProblemSpec spec = to_spec(boundary_pair());
  const GridSolution grid = brute_force_grid(spec, 201);

  CHECK(grid.candidates == 201 * 201);
  CHECK(grid.feasible > 0);
  CHECK(grid.value == doctest::Approx(0.36).epsilon(1e-9));
  // Every point on the active line is optimal; the tie break walks x_1 down
  // to its box corner.
  CHECK(grid.xs[0][0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(grid.xs[1][0] == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("grid search breaks exact cost ties toward the smaller point") {
  BuiltinProblem data = boundary_pair();
  data.cost.Q = Mat::Zero(1, 1);  // constant cost
  data.cost.c = 5.0;
  for (auto& agent : data.agents) {
    agent.affine_g->h = Vec::Constant(1, -10.0);  // constraint never binds
  }
  const GridSolution grid = brute_force_grid(to_spec(data), 3);
  CHECK(grid.candidates == 9);
  CHECK(grid.feasible == 9);
  CHECK(grid.value == 5.0);
  CHECK(grid.xs[0][0] == -1.0);
  CHECK(grid.xs[1][0] == -1.0);
}

TEST_CASE("grid search guards its domain") {
  CHECK_THROWS_AS(brute_force_grid(to_spec(random_qp({5, 1, 2, 1}).problem), 5),
                  TooLarge);
  CHECK_THROWS_AS(brute_force_grid(to_spec(boundary_pair()), 1), ConfigError);

  ProblemSpec no_bounds = to_spec(boundary_pair());
  no_bounds.agents[0].hull_lo = Vec();
  no_bounds.agents[0].hull_hi = Vec();
  no_bounds.agents[0].set_radius = 0.0;
  CHECK_THROWS_AS(brute_force_grid(no_bounds, 5), ConfigError);

  BuiltinProblem hopeless = boundary_pair();
  for (auto& agent : hopeless.agents) {
    agent.affine_g->h = Vec::Constant(1, 10.0);  // infeasible everywhere
  }
  CHECK_THROWS_AS(brute_force_grid(to_spec(hopeless), 5), NoConvergence);
}

TEST_CASE("prox grid pins the scalar soft threshold") {
  auto l1 = [](const Vec& a) { return Vec::Constant(1, a.lpNorm<1>() - 2.0); };
  const Vec w = Vec::Constant(1, 1.5);
  const Vec lo = Vec::Constant(1, -2.0), hi = Vec::Constant(1, 2.0);

  const Vec interior = prox_grid_oracle(l1, Vec::Constant(1, 0.7), w, 0.2, lo,
                                        hi, 8001);
  CHECK(std::abs(interior[0] - soft_threshold(Vec::Constant(1, 0.7), 0.3)[0]) <
        5.1e-4);

  // Shrinking 3.0 by 0.3 still lands outside the box, so the exact answer
  // clips to the upper bound, which is a grid node.
  const Vec clipped = prox_grid_oracle(l1, Vec::Constant(1, 3.0), w, 0.2, lo,
                                       hi, 8001);
  CHECK(clipped[0] == 2.0);

  CHECK_THROWS_AS(prox_grid_oracle(l1, Vec::Zero(3), w, 0.2, Vec::Zero(3),
                                   Vec::Ones(3), 11),
                  TooLarge);
  CHECK_THROWS_AS(prox_grid_oracle(l1, Vec::Zero(1), w, -1.0, lo, hi, 11),
                  ConfigError);
  CHECK_THROWS_AS(prox_grid_oracle(l1, Vec::Zero(1), w, 0.2, Vec::Zero(2),
                                   Vec::Ones(2), 11),
                  DimensionMismatch);
  CHECK_THROWS_AS(prox_grid_oracle(l1, Vec::Zero(1), w, 0.2, lo, hi, 1),
                  ConfigError);
}

TEST_CASE("reference solver recovers a planted optimum") {
  const QpInstance inst = random_qp({5, 2, 2, 1});
  const ProblemSpec spec = to_spec(inst.problem);
  const ReferenceSolution sol = solve_reference(spec);

  CHECK(sol.method == "augmented-lagrangian");
  CHECK(std::abs(sol.value - inst.planted_value) <
        1e-5 * std::max(1.0, std::abs(inst.planted_value)));
  REQUIRE(sol.lambda.size() == 1);
  CHECK(sol.lambda[0] == doctest::Approx(inst.planted_lambda).epsilon(1e-4));
  CHECK(sol.feas_residual <= 1e-8);
  CHECK(sol.compl_residual <= 1e-7);
}

TEST_CASE("reference solver agrees with the grid on a boundary optimum") {
  const ProblemSpec spec = to_spec(boundary_pair());
  const ReferenceSolution sol = solve_reference(spec);
  CHECK(std::abs(sol.value - 0.36) < 1e-6);
  CHECK(sol.lambda[0] == doctest::Approx(1.2).epsilon(1e-5));

  const GridSolution grid = brute_force_grid(spec, 201);
  CHECK(std::abs(sol.value - grid.value) < 1e-6);
}

TEST_CASE("reference solver takes the bisection route for l1 budgets") {
  const SparseInstance inst =
      generate_sparse_regression({3, 4, 10, 1, 2.0, 0.01, -1.0, 5});
  const ProblemSpec spec = to_spec(inst.problem);
  const ReferenceSolution sol = solve_reference(spec);

  CHECK(sol.method == "dual-bisection");
  CHECK(sol.feas_residual <= 1e-8);
  CHECK(sol.compl_residual <= 1e-7);
  REQUIRE(sol.lambda.size() == 1);
  CHECK(sol.lambda[0] >= 0.0);

  double total_l1 = 0.0;
  for (const Vec& b : sol.xs) total_l1 += b.lpNorm<1>();
  CHECK(total_l1 <= inst.l1_budget + 1e-7);
}

TEST_CASE("reference solver certifies the demand scheduling family") {
  const DsmInstance inst = generate_dsm({20, 24, 7});
  const ProblemSpec spec = to_spec(inst.to_builtin());
  const ReferenceSolution sol = solve_reference(spec);

  CHECK(sol.method == "augmented-lagrangian");
  CHECK(sol.feas_residual <= 1e-8);
  CHECK(sol.compl_residual <= 1e-7);
  // The cost is a sum of squares, nonnegative up to cancellation in the
  // expanded quadratic form.
  CHECK(sol.value >= -1e-9);
  CHECK(sol.value < inst.cost(inst.unscheduled()));
}

TEST_CASE("reference solver refuses a spec with neither route") {
  ProblemSpec spec = to_spec(boundary_pair());
  for (auto& agent : spec.agents) {
    agent.g_jacobian = nullptr;
    agent.g_prox = nullptr;
  }
  CHECK_THROWS_AS(solve_reference(spec), ModeMismatch);
}

TEST_CASE("derivative spot check accepts the generated families") {
  CHECK(fd_check(to_spec(random_qp({4, 2, 3, 9}).problem)).worst() < 1e-5);
  CHECK(fd_check(to_spec(generate_dsm({4, 6, 2}).to_builtin())).worst() <
        1e-5);
}

TEST_CASE("oracle cache hits, re-certifies and survives corruption") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "pdp-oracle-cache-test";
  fs::remove_all(dir);

  const QpInstance inst = random_qp({3, 2, 2, 13});
  const ProblemSpec spec = to_spec(inst.problem);
  OracleOptions opts;
  opts.cache_dir = dir.string();

  const ReferenceSolution first = solve_reference(spec, opts);
  const fs::path file = dir / (inst.problem.cache_key + ".json");
  REQUIRE(fs::exists(file));

  // Doctor a metadata field; a cache hit hands it back untouched.
  nlohmann::json j;
  {
    std::ifstream in(file);
    in >> j;
  }
  j["outer_iters"] = 777;
  {
    std::ofstream out(file);
    out << j.dump(2);
  }
  const ReferenceSolution hit = solve_reference(spec, opts);
  CHECK(hit.outer_iters == 777);
  CHECK(std::abs(hit.value - first.value) < 1e-12);

  // Swap the stored point for the Slater corners with a zero multiplier:
  // feasible and complementary, but nowhere near stationary. The entry must
  // be rejected on re-certification and solved afresh.
  nlohmann::json xs = nlohmann::json::array();
  for (const Vec& p : spec.slater.points) {
    xs.push_back(std::vector<double>(p.data(), p.data() + p.size()));
  }
  j["xs"] = xs;
  j["lambda"] = std::vector<double>{0.0};
  {
    std::ofstream out(file);
    out << j.dump(2);
  }
  const ReferenceSolution redone = solve_reference(spec, opts);
  CHECK(redone.outer_iters != 777);
  CHECK(std::abs(redone.value - inst.planted_value) <
        1e-5 * std::max(1.0, std::abs(inst.planted_value)));

  // Outright garbage falls back to a fresh solve as well.
  {
    std::ofstream out(file);
    out << "not json at all";
  }
  const ReferenceSolution refreshed = solve_reference(spec, opts);
  CHECK(std::abs(refreshed.value - first.value) < 1e-9);

  fs::remove_all(dir);
}
