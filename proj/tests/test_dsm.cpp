#include "doctest.h"

#include <random>

#include "pdp/problems/dsm.hpp"
#include "pdp/validate.hpp"

using namespace pdp;

namespace {

std::vector<Vec> random_schedules(const DsmInstance& inst, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec> xs(inst.num_customers);
  for (int i = 0; i < inst.num_customers; ++i) {
    xs[i] = Vec(inst.horizon);
    for (int j = 0; j < inst.horizon; ++j) {
      xs[i][j] = inst.lo[i][j] + u(rng) * (inst.hi[i][j] - inst.lo[i][j]);
    }
  }
  return xs;
}

}  // namespace

TEST_CASE("generator produces consistent shapes and prices") {
  const DsmInstance inst = generate_dsm({6, 12, 4});
  CHECK(inst.num_customers == 6);
  CHECK(inst.horizon == 12);
  REQUIRE(static_cast<int>(inst.psi.size()) == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(inst.psi[i].rows() == 12);
    CHECK(inst.psi[i].cols() == 12);
    CHECK(inst.psi[i].minCoeff() >= 0.0);
    CHECK((inst.hi[i] - inst.lo[i]).minCoeff() > 0.0);
  }
  CHECK(inst.bid.minCoeff() > 0.0);
  CHECK(inst.pi_p == 1.0 / 6.0);
  CHECK(inst.pi_s == 0.8 / 6.0);

  // The slack cap leaves one unit of headroom above the worst-case excess.
  Vec top = Vec::Zero(12);
  for (int i = 0; i < 6; ++i) top += inst.psi[i] * inst.hi[i];
  const Vec cap = (top - inst.bid).cwiseMax(0.0) + Vec::Ones(12);
  CHECK((inst.z_max - cap).norm() == 0.0);

  CHECK_THROWS_AS(generate_dsm({0, 12, 4}), Error);
}

TEST_CASE("generator is deterministic in the seed") {
  const DsmInstance a = generate_dsm({5, 8, 3});
  const DsmInstance b = generate_dsm({5, 8, 3});
  CHECK((a.bid - b.bid).norm() == 0.0);
  for (int i = 0; i < 5; ++i) {
    CHECK((a.psi[i] - b.psi[i]).norm() == 0.0);
  }
  const DsmInstance c = generate_dsm({5, 8, 9});
  CHECK((a.bid - c.bid).norm() > 0.0);
}

TEST_CASE("aggregate and unscheduled follow their definitions") {
  const DsmInstance inst = generate_dsm({4, 6, 8});
  const std::vector<Vec> xs = random_schedules(inst, 1);

  Vec manual = Vec::Zero(6);
  for (int i = 0; i < 4; ++i) manual += inst.psi[i] * xs[i];
  CHECK((inst.aggregate(xs) - manual).norm() == 0.0);

  const std::vector<Vec> mid = inst.unscheduled();
  for (int i = 0; i < 4; ++i) {
    CHECK((mid[i] - 0.5 * (inst.lo[i] + inst.hi[i])).norm() == 0.0);
  }

  CHECK_THROWS_AS(inst.aggregate(std::vector<Vec>(2)), DimensionMismatch);
}

TEST_CASE("slack elimination reproduces the two-sided penalty cost") {
  const DsmInstance inst = generate_dsm({5, 10, 6});
  const BuiltinProblem builtin = inst.to_builtin();
  const ProblemSpec spec = to_spec(builtin);

  for (unsigned seed : {1u, 2u, 3u}) {
    std::vector<Vec> xs = random_schedules(inst, seed);
    // The quadratic in (aggregate, z) is minimized over z >= 0 at the
    // positive part of the excess, where it collapses to the original cost.
    Vec z = (inst.aggregate(xs) - inst.bid).cwiseMax(0.0);
    std::vector<Vec> full = xs;
    full.push_back(std::move(z));
    CHECK(objective(spec, full) ==
          doctest::Approx(inst.cost(xs)).epsilon(1e-12));
  }
}

TEST_CASE("reformulation wires one slack agent behind the customers") {
  const DsmInstance inst = generate_dsm({4, 6, 2});
  const BuiltinProblem builtin = inst.to_builtin();

  CHECK(builtin.dims.num_agents == 5);
  CHECK(builtin.dims.primal_dim == 6);
  CHECK(builtin.dims.map_dim == 12);
  CHECK(builtin.dims.constraint_dim == 6);

  // Customers map into the first block of R^{2T}, the slack into the second.
  for (int i = 0; i < 4; ++i) {
    CHECK((builtin.agents[i].f_matrix.topRows(6) - inst.psi[i]).norm() == 0.0);
    CHECK(builtin.agents[i].f_matrix.bottomRows(6).norm() == 0.0);
  }
  CHECK(builtin.agents[4].f_matrix.topRows(6).norm() == 0.0);
  CHECK((builtin.agents[4].f_matrix.bottomRows(6) - Mat::Identity(6, 6))
            .norm() == 0.0);
  CHECK((builtin.agents[4].box->lo).norm() == 0.0);
  CHECK((builtin.agents[4].box->hi - inst.z_max).norm() == 0.0);

  // The coupled rows telescope to aggregate - z - bid.
  const ProblemSpec spec = to_spec(builtin);
  std::vector<Vec> xs = random_schedules(inst, 5);
  Vec z = Vec::Constant(6, 0.7);
  std::vector<Vec> full = xs;
  full.push_back(z);
  const Vec expect = inst.aggregate(xs) - z - inst.bid;
  CHECK((sum_g(spec, full) - expect).norm() < 1e-12);
}

TEST_CASE("reformulated spec passes validation with a usable certificate") {
  const ProblemSpec spec = to_spec(generate_dsm({5, 8, 11}).to_builtin());
  CHECK(validate_problem(spec, 2).ok());
  CHECK(spec.slater.gamma > 0.0);
  CHECK(dual_ball_radius(spec) > 0.0);
}

TEST_CASE("cache keys fingerprint the instance content") {
  const std::string a = generate_dsm({5, 8, 1}).to_builtin().cache_key;
  const std::string b = generate_dsm({5, 8, 1}).to_builtin().cache_key;
  const std::string c = generate_dsm({5, 8, 2}).to_builtin().cache_key;
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.rfind("dsm-n5-t8-h", 0) == 0);
  CHECK(c.rfind("dsm-n5-t8-h", 0) == 0);
}
