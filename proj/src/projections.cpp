#include "pdp/projections.hpp"

namespace pdp {

Vec project_box(const Vec& v, const Vec& lo, const Vec& hi) {
  if (v.size() != lo.size() || v.size() != hi.size()) {
    throw DimensionMismatch("project_box: bound sizes do not match input");
  }
  return v.cwiseMax(lo).cwiseMin(hi);
}

Vec project_nonneg(const Vec& v) { return v.cwiseMax(0.0); }

Vec project_ball(const Vec& v, double radius) {
  const double n = v.norm();
  if (n <= radius) return v;
  return v * (radius / n);
}

Vec project_halfspace(const Vec& v, const Vec& a, double b) {
  const double slack = a.dot(v) - b;
  if (slack <= 0.0) return v;
  return v - a * (slack / a.squaredNorm());
}

Vec project_dual_ball(const Vec& v, double radius) {
  Vec u = v.cwiseMax(0.0);
  const double n = u.norm();
  if (n > radius) u *= radius / n;
  return u;
}

Vec dykstra(const Vec& v, const std::vector<Projection>& sets, double tol,
            int max_sweeps) {
  if (sets.empty()) return v;
  if (sets.size() == 1) return sets[0](v);

  Vec x = v;
  std::vector<Vec> corr(sets.size(), Vec::Zero(v.size()));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (std::size_t s = 0; s < sets.size(); ++s) {
      const Vec y = x + corr[s];
      Vec px = sets[s](y);
      corr[s] = y - px;
      moved = std::max(moved, (px - x).norm());
      x = std::move(px);
    }
    if (moved <= tol) return x;
  }
  throw NoConvergence("dykstra: no fixed point within sweep budget");
}

Vec project_polytope(const Vec& v, const Mat& A, const Vec& b, const Vec& lo,
                     const Vec& hi, double tol, int max_sweeps) {
  if (A.rows() != b.size() || A.cols() != v.size()) {
    throw DimensionMismatch("project_polytope: A/b sizes do not match input");
  }
  std::vector<Projection> sets;
  sets.push_back([&lo, &hi](const Vec& u) { return project_box(u, lo, hi); });
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    Vec a = A.row(r).transpose();
    double rhs = b[r];
    sets.push_back([a = std::move(a), rhs](const Vec& u) {
      return project_halfspace(u, a, rhs);
    });
  }
  return dykstra(v, sets, tol, max_sweeps);
}

}  // namespace pdp
