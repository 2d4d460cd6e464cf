#include "doctest.h"

#include <cmath>

#include "pdp/oracle.hpp"
#include "pdp/problems/sparse.hpp"
#include "pdp/validate.hpp"

using namespace pdp;

TEST_CASE("planted blocks respect support, magnitude and box limits") {
  const SparseParams params{3, 8, 32, 2, 2.0, 0.0, -1.0, 4};
  const SparseInstance inst = generate_sparse_regression(params);

  REQUIRE(static_cast<int>(inst.planted_x.size()) == 3);
  for (const Vec& x : inst.planted_x) {
    int nonzeros = 0;
    for (int j = 0; j < x.size(); ++j) {
      if (x[j] != 0.0) {
        ++nonzeros;
        CHECK(std::abs(x[j]) >= 0.5);
        CHECK(std::abs(x[j]) <= 1.2);
      }
    }
    CHECK(nonzeros == 2);
    CHECK(x.cwiseAbs().maxCoeff() <= 2.0);
  }
}

TEST_CASE("default budget equals the planted l1 mass") {
  const SparseInstance inst =
      generate_sparse_regression({3, 8, 32, 2, 2.0, 0.0, -1.0, 4});
  double planted_l1 = 0.0;
  for (const Vec& x : inst.planted_x) planted_l1 += x.lpNorm<1>();
  CHECK(inst.l1_budget == doctest::Approx(planted_l1).epsilon(1e-14));

  // The per-agent rows below up to the shared budget.
  const ProblemSpec spec = to_spec(inst.problem);
  CHECK(std::abs(sum_g(spec, inst.planted_x).sum()) < 1e-12);

  const SparseInstance fixed =
      generate_sparse_regression({3, 8, 32, 2, 2.0, 0.0, 3.5, 4});
  CHECK(fixed.l1_budget == 3.5);
}

TEST_CASE("noiseless observations make the planted point a root") {
  const SparseInstance inst =
      generate_sparse_regression({4, 6, 24, 2, 2.0, 0.0, -1.0, 9});
  const ProblemSpec spec = to_spec(inst.problem);
  CHECK(std::abs(objective(spec, inst.planted_x)) < 1e-10);

  const SparseInstance noisy =
      generate_sparse_regression({4, 6, 24, 2, 2.0, 0.1, -1.0, 9});
  CHECK(objective(to_spec(noisy.problem), noisy.planted_x) > 1e-6);
}

TEST_CASE("constraint callbacks implement the shifted l1 norm") {
  const SparseInstance inst =
      generate_sparse_regression({3, 4, 12, 1, 2.0, 0.01, -1.0, 5});
  const ProblemSpec spec = to_spec(inst.problem);

  Vec x(4);
  x << 0.5, -1.5, 0.0, 2.0;
  const double expect = x.lpNorm<1>() - inst.l1_budget / 3.0;
  CHECK(spec.agents[0].g(x)[0] == doctest::Approx(expect).epsilon(1e-15));

  const Mat rows = spec.agents[0].g_subgradient(x);
  CHECK(rows(0, 0) == 1.0);
  CHECK(rows(0, 1) == -1.0);
  CHECK(rows(0, 2) == 0.0);  // the deterministic selection at a kink
  CHECK(rows(0, 3) == 1.0);

  CHECK_FALSE(static_cast<bool>(spec.agents[0].g_jacobian));
}

TEST_CASE("l1 prox matches the clipped soft threshold and the grid") {
  const SparseInstance inst =
      generate_sparse_regression({2, 2, 8, 1, 1.5, 0.0, -1.0, 7});
  const ProblemSpec spec = to_spec(inst.problem);
  const auto& prox = spec.agents[0].g_prox;
  REQUIRE(static_cast<bool>(prox));

  Vec v(2);
  v << 0.9, -2.4;
  const Vec w = Vec::Constant(1, 1.1);
  const double rho = 0.3;

  const Vec got = prox(v, w, rho);
  const Vec closed = soft_threshold(v, w[0] * rho)
                         .cwiseMax(Vec::Constant(2, -1.5))
                         .cwiseMin(Vec::Constant(2, 1.5));
  CHECK((got - closed).norm() < 1e-15);

  auto g_fn = [&](const Vec& a) { return spec.agents[0].g(a); };
  const Vec grid = prox_grid_oracle(g_fn, v, w, rho,
                                    Vec::Constant(2, -1.5),
                                    Vec::Constant(2, 1.5), 1501);
  CHECK((got - grid).cwiseAbs().maxCoeff() < 2.1e-3);
}

TEST_CASE("sparse specs validate in proximal form") {
  const SparseInstance inst =
      generate_sparse_regression({3, 4, 12, 1, 2.0, 0.01, -1.0, 8});
  const ProblemSpec spec = to_spec(inst.problem);
  const ValidationReport report = validate_problem(spec, 4);
  CHECK(report.ok());
  CHECK(spec.slater.gamma > 0.0);
}

TEST_CASE("generation is deterministic in the seed") {
  const SparseInstance a =
      generate_sparse_regression({3, 5, 16, 2, 2.0, 0.05, -1.0, 12});
  const SparseInstance b =
      generate_sparse_regression({3, 5, 16, 2, 2.0, 0.05, -1.0, 12});
  const SparseInstance c =
      generate_sparse_regression({3, 5, 16, 2, 2.0, 0.05, -1.0, 13});
  CHECK(a.problem.cache_key == b.problem.cache_key);
  CHECK(a.problem.cache_key != c.problem.cache_key);
  for (int i = 0; i < 3; ++i) {
    CHECK((a.planted_x[i] - b.planted_x[i]).norm() == 0.0);
    CHECK((a.problem.agents[i].f_matrix - b.problem.agents[i].f_matrix)
              .norm() == 0.0);
  }
  CHECK((a.problem.cost.q - c.problem.cost.q).norm() > 0.0);
}
