#pragma once

#include "pdp/problems/builtin.hpp"

namespace pdp {

// Day-ahead demand scheduling: N customers control appliance start profiles
// x_i in [lo_i, hi_i] subset R^T; the resulting load is Psi_i x_i, where the
// columns of Psi_i are time-shifted copies of non-interruptible appliance
// profiles. A retailer bought the bid p ahead of time, pays pi_p per squared
// unit of real-time excess and pi_s per squared unit of shortfall:
//
//   min  pi_p ||(sum_i Psi_i x_i - p)^+||^2 + pi_s ||(p - sum_i Psi_i x_i)^+||^2.
//
// With a slack z >= 0 and the coupled constraint sum_i Psi_i x_i - p - z <= 0
// this becomes jointly convex and smooth:
//
//   min  pi_p ||z||^2 + pi_s ||z - sum_i Psi_i x_i + p||^2,
//
// and the slack acts as agent N+1 with f(z) = (0, z), g(z) = -z - p/(N+1),
// while customers carry f(x_i) = (Psi_i x_i, 0), g(x_i) = Psi_i x_i - p/(N+1).
struct DsmParams {
  int num_customers = 20;
  int horizon = 24;  // T
  unsigned seed = 1;
};

struct DsmInstance {
  int num_customers = 0;
  int horizon = 0;
  std::vector<Mat> psi;        // T x T load maps, one per customer
  std::vector<Vec> lo, hi;     // box schedules
  Vec bid;                     // p, strictly positive
  double pi_p = 0.0;           // real-time purchase price (1/N)
  double pi_s = 0.0;           // shortfall penalty (0.8/N)
  Vec z_max;                   // generous slack cap, inactive at the optimum

  Vec aggregate(const std::vector<Vec>& xs) const;  // sum_i Psi_i x_i
  // Original (slack-free) objective at a customer schedule.
  double cost(const std::vector<Vec>& xs) const;
  // Schedules without coordination: every customer at the box midpoint.
  std::vector<Vec> unscheduled() const;

  // N+1 agent reformulation, K = T, M = 2T, P = T.
  BuiltinProblem to_builtin() const;
};

DsmInstance generate_dsm(const DsmParams& params);

}  // namespace pdp
