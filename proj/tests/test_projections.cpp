#include "doctest.h"

#include <random>

#include "pdp/projections.hpp"

using namespace pdp;

namespace {

Vec make_vec(std::initializer_list<double> vals) {
  Vec v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

Vec random_vec(std::mt19937& rng, int dim, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = u(rng);
  return v;
}

}  // namespace

TEST_CASE("box projection clamps componentwise") {
  const Vec lo = make_vec({-1.0, -1.0, -1.0});
  const Vec hi = make_vec({1.0, 1.0, 1.0});
  const Vec p = project_box(make_vec({-3.0, 0.5, 7.0}), lo, hi);
  CHECK(p[0] == -1.0);
  CHECK(p[1] == 0.5);
  CHECK(p[2] == 1.0);

  CHECK_THROWS_AS(project_box(make_vec({1.0, 2.0}), lo, hi),
                  DimensionMismatch);
}

TEST_CASE("nonnegative projection zeroes the negative part") {
  const Vec p = project_nonneg(make_vec({-2.0, 0.0, 3.0}));
  CHECK(p[0] == 0.0);
  CHECK(p[1] == 0.0);
  CHECK(p[2] == 3.0);
}

TEST_CASE("ball projection rescales outside points only") {
  const Vec p = project_ball(make_vec({3.0, 4.0}), 1.0);
  CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.8).epsilon(1e-15));

  const Vec inside = make_vec({0.1, -0.2});
  const Vec q = project_ball(inside, 1.0);
  CHECK((q - inside).norm() == 0.0);
}

TEST_CASE("halfspace projection lands on the boundary along the normal") {
  const Vec a = make_vec({1.0, 0.0});
  const Vec p = project_halfspace(make_vec({2.0, 0.7}), a, 1.0);
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p[1] == 0.7);

  const Vec inside = make_vec({-5.0, 0.3});
  CHECK((project_halfspace(inside, a, 1.0) - inside).norm() == 0.0);
}

TEST_CASE("dual ball projection: clip to the orthant, then rescale") {
  const Vec p = project_dual_ball(make_vec({3.0, -4.0}), 2.0);
  CHECK(p[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(p[1] == 0.0);

  const Vec inside = make_vec({0.3, 0.4});
  CHECK((project_dual_ball(inside, 1.0) - inside).norm() == 0.0);

  const Vec allneg = project_dual_ball(make_vec({-1.0, -2.0}), 5.0);
  CHECK(allneg.norm() == 0.0);
}

TEST_CASE("dual ball projection satisfies the variational inequality") {
  std::mt19937 rng(42);
  const double radius = 1.5;
  for (int trial = 0; trial < 50; ++trial) {
    const Vec v = random_vec(rng, 4, 3.0);
    const Vec p = project_dual_ball(v, radius);
    // Feasible samples: clip a random draw and shrink it into the ball.
    for (int s = 0; s < 20; ++s) {
      Vec z = project_nonneg(random_vec(rng, 4, 3.0));
      if (z.norm() > radius) z *= radius / z.norm();
      CHECK((v - p).dot(z - p) <= 1e-10);
    }
  }
}

TEST_CASE("projections are idempotent and nonexpansive") {
  std::mt19937 rng(7);
  const Vec lo = make_vec({-1.0, 0.0, -2.0});
  const Vec hi = make_vec({1.0, 0.5, 2.0});
  for (int trial = 0; trial < 50; ++trial) {
    const Vec u = random_vec(rng, 3, 4.0);
    const Vec v = random_vec(rng, 3, 4.0);

    const Vec pu = project_box(u, lo, hi);
    CHECK((project_box(pu, lo, hi) - pu).norm() == 0.0);
    CHECK((pu - project_box(v, lo, hi)).norm() <= (u - v).norm() + 1e-15);

    const Vec bu = project_dual_ball(u, 1.0);
    CHECK((project_dual_ball(bu, 1.0) - bu).norm() <= 1e-15);
    CHECK((bu - project_dual_ball(v, 1.0)).norm() <= (u - v).norm() + 1e-15);
  }
}

TEST_CASE("dykstra projects onto an intersection of boxes exactly") {
  const Vec lo1 = make_vec({-2.0, -2.0}), hi1 = make_vec({1.0, 1.0});
  const Vec lo2 = make_vec({0.0, 0.0}), hi2 = make_vec({3.0, 3.0});
  std::vector<Projection> sets = {
      [&](const Vec& v) { return project_box(v, lo1, hi1); },
      [&](const Vec& v) { return project_box(v, lo2, hi2); },
  };
  // The intersection is the box [0, 1]^2, so the answer is a plain clamp.
  const Vec p = dykstra(make_vec({2.0, -1.0}), sets);
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("dykstra on a ball and a halfspace finds the exact point") {
  // Unit disc intersected with {x <= 0}; the closest point to (1, 1) is
  // (0, 1), strictly better than what cyclic projection would return.
  std::vector<Projection> sets = {
      [](const Vec& v) { return project_ball(v, 1.0); },
      [](const Vec& v) {
        Vec a(2);
        a << 1.0, 0.0;
        return project_halfspace(v, a, 0.0);
      },
  };
  const Vec p = dykstra(make_vec({1.0, 1.0}), sets, 1e-12);
  CHECK(p[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(p[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("polytope projection matches the hand-computed point") {
  Mat a(1, 2);
  a << 1.0, 1.0;
  const Vec b = make_vec({1.5});
  const Vec lo = make_vec({0.0, 0.0}), hi = make_vec({2.0, 2.0});
  const Vec p = project_polytope(make_vec({2.0, 2.0}), a, b, lo, hi, 1e-12);
  CHECK(p[0] == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(p[1] == doctest::Approx(0.75).epsilon(1e-9));

  CHECK_THROWS_AS(project_polytope(make_vec({1.0}), a, b, lo, hi),
                  DimensionMismatch);
}

TEST_CASE("polytope projection satisfies the variational inequality") {
  std::mt19937 rng(11);
  Mat a(2, 3);
  a << 1.0, 1.0, 0.0, 0.0, -1.0, 2.0;
  const Vec b = make_vec({1.0, 0.5});
  const Vec lo = make_vec({-1.0, -1.0, -1.0});
  const Vec hi = make_vec({1.0, 1.0, 1.0});

  auto feasible = [&](const Vec& z) {
    return (a * z - b).maxCoeff() <= 1e-9 && (z - lo).minCoeff() >= -1e-9 &&
           (hi - z).minCoeff() >= -1e-9;
  };

  for (int trial = 0; trial < 20; ++trial) {
    const Vec v = random_vec(rng, 3, 2.5);
    const Vec p = project_polytope(v, a, b, lo, hi, 1e-12);
    CHECK(feasible(p));
    int checked = 0;
    while (checked < 30) {
      const Vec z = project_polytope(random_vec(rng, 3, 1.0), a, b, lo, hi,
                                     1e-12);
      CHECK((v - p).dot(z - p) <= 1e-8);
      ++checked;
    }
  }
}
