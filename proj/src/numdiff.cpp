#include "pdp/numdiff.hpp"

#include <algorithm>
#include <cmath>

namespace pdp {

Vec central_diff_gradient(const std::function<double(const Vec&)>& fn,
                          const Vec& x, double h) {
  Vec g(x.size());
  Vec probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double step = h * std::max(1.0, std::abs(x[j]));
    probe[j] = x[j] + step;
    const double hi = fn(probe);
    probe[j] = x[j] - step;
    const double lo = fn(probe);
    probe[j] = x[j];
    g[j] = (hi - lo) / (2.0 * step);
  }
  return g;
}

Mat central_diff_jacobian(const std::function<Vec(const Vec&)>& fn,
                          const Vec& x, double h) {
  const Vec f0 = fn(x);
  Mat jac(f0.size(), x.size());
  Vec probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double step = h * std::max(1.0, std::abs(x[j]));
    probe[j] = x[j] + step;
    const Vec hi = fn(probe);
    probe[j] = x[j] - step;
    const Vec lo = fn(probe);
    probe[j] = x[j];
    jac.col(j) = (hi - lo) / (2.0 * step);
  }
  return jac;
}

double rel_error(const Vec& a, const Vec& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

double rel_error(const Mat& a, const Mat& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace pdp
