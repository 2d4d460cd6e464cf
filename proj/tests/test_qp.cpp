#include "doctest.h"

#include <cmath>

#include "pdp/problems/qp.hpp"
#include "pdp/validate.hpp"

using namespace pdp;

TEST_CASE("planted point satisfies the optimality system") {
  const QpInstance inst = random_qp({5, 2, 2, 1});
  const ProblemSpec spec = to_spec(inst.problem);

  // Tight coupled row, interior primal blocks.
  const Vec sg = sum_g(spec, inst.planted_x);
  CHECK(std::abs(sg[0]) < 1e-9);
  for (const Vec& x : inst.planted_x) {
    CHECK(x.cwiseAbs().maxCoeff() < 1.0);
  }

  // Zero lagrangian gradient block by block at the planted multiplier.
  const Vec w = spec.cost.grad(sum_f(spec, inst.planted_x));
  const Vec lam = Vec::Constant(1, inst.planted_lambda);
  for (int i = 0; i < 5; ++i) {
    const Vec dir =
        primal_direction(spec.agents[i], inst.planted_x[i], w,
                         spec.agents[i].g_jacobian(inst.planted_x[i]), lam);
    CHECK(dir.norm() < 1e-9);
  }

  CHECK(objective(spec, inst.planted_x) ==
        doctest::Approx(inst.planted_value).epsilon(1e-12));
  CHECK(inst.planted_lambda > 0.0);
  CHECK(inst.planted_lambda < dual_ball_radius(spec));
}

TEST_CASE("requested dimensions are honored") {
  const QpInstance inst = random_qp({3, 4, 2, 17});
  CHECK(inst.problem.dims.num_agents == 3);
  CHECK(inst.problem.dims.primal_dim == 4);
  CHECK(inst.problem.dims.map_dim == 2);
  CHECK(inst.problem.dims.constraint_dim == 1);
  CHECK(inst.problem.cache_key == "qp-n3-k4-m2-seed17");
  REQUIRE(static_cast<int>(inst.planted_x.size()) == 3);
  CHECK(inst.planted_x[0].size() == 4);

  CHECK_THROWS_AS(random_qp({0, 2, 2, 1}), Error);
}

TEST_CASE("generation is deterministic in the seed") {
  const QpInstance a = random_qp({4, 2, 3, 21});
  const QpInstance b = random_qp({4, 2, 3, 21});
  const QpInstance c = random_qp({4, 2, 3, 22});
  for (int i = 0; i < 4; ++i) {
    CHECK((a.planted_x[i] - b.planted_x[i]).norm() == 0.0);
    CHECK((a.problem.agents[i].f_matrix - b.problem.agents[i].f_matrix)
              .norm() == 0.0);
  }
  CHECK(a.planted_value == b.planted_value);

  bool differs = std::abs(a.planted_value - c.planted_value) > 0.0;
  for (int i = 0; i < 4 && !differs; ++i) {
    differs = (a.planted_x[i] - c.planted_x[i]).norm() > 0.0;
  }
  CHECK(differs);
}

TEST_CASE("every seed in a sweep yields a valid certificate") {
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const QpInstance inst = random_qp({5, 2, 2, seed});
    const ProblemSpec spec = to_spec(inst.problem);
    CHECK(spec.slater.gamma > 0.0);
    CHECK(dual_ball_radius(spec) > 0.0);
    CHECK(sum_g(spec, spec.slater.points).maxCoeff() < 0.0);
  }
  CHECK(validate_problem(to_spec(random_qp({5, 2, 2, 1}).problem), 3).ok());
}
