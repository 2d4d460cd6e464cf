#include "pdp/problems/dsm.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <sstream>

namespace pdp {
namespace {

// FNV-1a over the raw coefficient bytes. The cache key has to distinguish
// instances that share (n, t) but were drawn with different seeds or edited
// by hand, so the content itself goes into the key.
struct Fingerprint {
  std::uint64_t h = 1469598103934665603ULL;

  void add(const double* data, std::size_t count) {
    const unsigned char* bytes = reinterpret_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < count * sizeof(double); ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  }
  void add(const Vec& v) { add(v.data(), static_cast<std::size_t>(v.size())); }
  void add(const Mat& m) { add(m.data(), static_cast<std::size_t>(m.size())); }
  void add(double v) { add(&v, 1); }
};

}  // namespace

Vec DsmInstance::aggregate(const std::vector<Vec>& xs) const {
  if (static_cast<int>(xs.size()) < num_customers) {
    throw DimensionMismatch("aggregate: need one schedule per customer");
  }
  Vec s = Vec::Zero(horizon);
  for (int i = 0; i < num_customers; ++i) s += psi[i] * xs[i];
  return s;
}

double DsmInstance::cost(const std::vector<Vec>& xs) const {
  const Vec s = aggregate(xs) - bid;
  return pi_p * s.cwiseMax(0.0).squaredNorm() +
         pi_s * (-s).cwiseMax(0.0).squaredNorm();
}

std::vector<Vec> DsmInstance::unscheduled() const {
  std::vector<Vec> xs(num_customers);
  for (int i = 0; i < num_customers; ++i) xs[i] = 0.5 * (lo[i] + hi[i]);
  return xs;
}

BuiltinProblem DsmInstance::to_builtin() const {
  const int n = num_customers;
  const int t = horizon;
  BuiltinProblem data;
  data.dims = {n + 1, t, 2 * t, t};
  data.name = "demand scheduling";
  Fingerprint fp;
  for (int i = 0; i < n; ++i) {
    fp.add(psi[i]);
    fp.add(lo[i]);
    fp.add(hi[i]);
  }
  fp.add(bid);
  fp.add(z_max);
  fp.add(pi_p);
  fp.add(pi_s);
  std::ostringstream key;
  key << "dsm-n" << n << "-t" << t << "-h" << std::hex << fp.h;
  data.cache_key = key.str();

  // Quadratic cost in u = (s, z): pi_p ||z||^2 + pi_s ||z - s + p||^2.
  Mat q = Mat::Zero(2 * t, 2 * t);
  q.topLeftCorner(t, t) = pi_s * Mat::Identity(t, t);
  q.topRightCorner(t, t) = -pi_s * Mat::Identity(t, t);
  q.bottomLeftCorner(t, t) = -pi_s * Mat::Identity(t, t);
  q.bottomRightCorner(t, t) = (pi_p + pi_s) * Mat::Identity(t, t);
  data.cost.Q = std::move(q);
  data.cost.q = Vec::Zero(2 * t);
  data.cost.q.head(t) = -2.0 * pi_s * bid;
  data.cost.q.tail(t) = 2.0 * pi_s * bid;
  data.cost.c = pi_s * bid.squaredNorm();
  data.q_tilde = 0.0;  // both cost terms are nonnegative
  data.delta = 1.0;

  // The bid splits evenly across the N+1 constraint blocks so the coupled
  // rows telescope to sum_i Psi_i x_i - p - z <= 0.
  const Vec bid_share = bid / static_cast<double>(n + 1);
  data.agents.resize(n + 1);
  data.slater_points.resize(n + 1);
  Vec mid_aggregate = Vec::Zero(t);
  for (int i = 0; i < n; ++i) {
    BuiltinAgent& agent = data.agents[i];
    agent.f_matrix = Mat::Zero(2 * t, t);
    agent.f_matrix.topRows(t) = psi[i];
    agent.affine_g = AffineConstraint{psi[i], -bid_share};
    agent.box = BoxSet{lo[i], hi[i]};
    data.slater_points[i] = 0.5 * (lo[i] + hi[i]);
    mid_aggregate += psi[i] * data.slater_points[i];
  }
  BuiltinAgent& slack = data.agents[n];
  slack.f_matrix = Mat::Zero(2 * t, t);
  slack.f_matrix.bottomRows(t) = Mat::Identity(t, t);
  slack.affine_g = AffineConstraint{-Mat::Identity(t, t), -bid_share};
  slack.box = BoxSet{Vec::Zero(t), z_max};
  // Strict feasibility: z one unit above the midpoint excess.
  data.slater_points[n] = (mid_aggregate - bid).cwiseMax(0.0) + Vec::Ones(t);
  return data;
}

DsmInstance generate_dsm(const DsmParams& params) {
  const int n = params.num_customers;
  const int t = params.horizon;
  if (n < 1 || t < 1) throw Error("generate_dsm: bad dimensions");

  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<int> duration(2, 5);
  // Appliance draw in kW. The scale matters: the published step constants
  // assume kW-scale aggregates, and the comparison ordering between the
  // methods only reproduces in that regime.
  std::uniform_real_distribution<double> level(2.0, 6.0);

  DsmInstance inst;
  inst.num_customers = n;
  inst.horizon = t;
  inst.pi_p = 1.0 / n;
  inst.pi_s = 0.8 / n;
  inst.psi.resize(n);
  inst.lo.resize(n);
  inst.hi.resize(n);
  for (int i = 0; i < n; ++i) {
    const int d = std::min(duration(rng), t);
    Vec profile(d);
    for (int j = 0; j < d; ++j) profile[j] = level(rng);
    Mat m = Mat::Zero(t, t);
    for (int col = 0; col < t; ++col) {
      for (int j = 0; j < d && col + j < t; ++j) m(col + j, col) = profile[j];
    }
    inst.psi[i] = std::move(m);
    inst.lo[i] = Vec::Zero(t);
    inst.hi[i] = Vec::Ones(t);
  }

  // Bid: most of the midpoint aggregate, reshaped by a daily swing so the
  // box schedules cannot match it exactly and the optimum stays nontrivial.
  Vec base = Vec::Zero(t);
  for (int i = 0; i < n; ++i) base += inst.psi[i] * Vec::Constant(t, 0.5);
  inst.bid = Vec(t);
  const double floor_level = 0.05 * base.mean();
  for (int r = 0; r < t; ++r) {
    const double swing = 1.0 + 0.2 * std::sin(2.0 * M_PI * r / t + 1.0);
    inst.bid[r] = std::max(0.85 * base[r] * swing, floor_level);
  }

  Vec top = Vec::Zero(t);
  for (int i = 0; i < n; ++i) top += inst.psi[i] * inst.hi[i];
  inst.z_max = (top - inst.bid).cwiseMax(0.0) + Vec::Ones(t);
  return inst;
}

}  // namespace pdp
