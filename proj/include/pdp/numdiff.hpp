#pragma once

#include <functional>
#include <vector>

#include "pdp/types.hpp"

namespace pdp {

// Central finite differences with per-coordinate step h * max(1, |x_j|).
Vec central_diff_gradient(const std::function<double(const Vec&)>& fn,
                          const Vec& x, double h = 1e-6);
Mat central_diff_jacobian(const std::function<Vec(const Vec&)>& fn,
                          const Vec& x, double h = 1e-6);

// ||a - b|| / max(1, ||b||).
double rel_error(const Vec& a, const Vec& b);
double rel_error(const Mat& a, const Mat& b);

}  // namespace pdp
