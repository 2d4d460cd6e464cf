#pragma once

#include <functional>
#include <vector>

#include "pdp/types.hpp"

namespace pdp {

using Projection = std::function<Vec(const Vec&)>;

// Componentwise clamp onto [lo, hi].
Vec project_box(const Vec& v, const Vec& lo, const Vec& hi);

// Componentwise max(v, 0).
Vec project_nonneg(const Vec& v);

// Euclidean projection onto the origin-centered ball of the given radius.
Vec project_ball(const Vec& v, double radius);

// Projection onto {a^T x <= b}.
Vec project_halfspace(const Vec& v, const Vec& a, double b);

// Projection onto {lambda >= 0, ||lambda|| <= radius}. Clipping to the
// orthant and then rescaling onto the ball is exact here because the ball is
// centered at the origin and the orthant is a cone.
Vec project_dual_ball(const Vec& v, double radius);

// Dykstra's alternating projection onto the intersection of closed convex
// sets, each given by its own exact projection. Converges to the exact
// projection of v, unlike plain cyclic projection.
Vec dykstra(const Vec& v, const std::vector<Projection>& sets,
            double tol = 1e-10, int max_sweeps = 10000);

// Projection onto {x in [lo, hi] : A x <= b} via Dykstra over the box and
// the individual halfspaces.
Vec project_polytope(const Vec& v, const Mat& A, const Vec& b, const Vec& lo,
                     const Vec& hi, double tol = 1e-10, int max_sweeps = 10000);

}  // namespace pdp
