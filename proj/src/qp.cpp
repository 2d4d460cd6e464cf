#include "pdp/problems/qp.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace pdp {

namespace {

// Curvature of F along the stacked map: A A^T = kCurvature * I exactly.
// Together with the constraint gain below this puts the slow primal-dual
// mode at roughly critical damping, so the saddle transient dies within a
// few units of accumulated step size instead of dragging on for the whole
// run. Diminishing steps 1/(b+k) accumulate only ~log(k), which makes
// badly conditioned instances hopeless at desk-scale iteration budgets.
constexpr double kCurvature = 5.0;

}  // namespace

QpInstance random_qp(const QpParams& params) {
  const int n = params.num_agents;
  const int k = params.primal_dim;
  const int m = params.map_dim;
  if (n < 1 || k < 1 || m < 1) throw Error("random_qp: bad dimensions");
  if (m > n * k) {
    throw Error("random_qp: map dimension exceeds stacked primal dimension");
  }

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  QpInstance inst;
  BuiltinProblem& data = inst.problem;
  data.dims = {n, k, m, 1};
  std::ostringstream key;
  key << "qp-n" << n << "-k" << k << "-m" << m << "-seed" << params.seed;
  data.name = "random quadratic";
  data.cache_key = key.str();

  // Stacked map with exact row orthogonality: A = sqrt(b) Q1^T where Q1 is
  // the thin Q factor of a Gaussian draw.
  Mat gauss(n * k, m);
  for (int r = 0; r < n * k; ++r) {
    for (int c = 0; c < m; ++c) gauss(r, c) = sym(rng);
  }
  const Mat q1 =
      Eigen::HouseholderQR<Mat>(gauss).householderQ() * Mat::Identity(n * k, m);
  const Mat stacked = std::sqrt(kCurvature) * q1.transpose();

  std::vector<Mat> maps(n);
  for (int i = 0; i < n; ++i) maps[i] = stacked.middleCols(i * k, k);

  // Constraint direction c: its norm sets the dual gain. Against curvature
  // b the slow mode solves s^2 + 2bs + 4b||c||^2/n = 0, critically damped
  // at ||c||^2 = bn/4; jitter the ratio a little per seed. Rows
  // a_i = 2 A_i^T c must all stay usable. The planted multiplier is kept
  // small: the dual starts at zero, and the transient it drags through the
  // primal scales with the distance it has to travel.
  Vec cdir(m);
  for (int tries = 0;; ++tries) {
    for (int r = 0; r < m; ++r) cdir[r] = sym(rng);
    if (cdir.norm() < 1e-3) continue;
    const double damping = 0.95 + 0.1 * unit(rng);
    cdir *= damping * 0.5 * std::sqrt(kCurvature * n) / cdir.norm();
    bool rows_ok = true;
    for (int i = 0; i < n; ++i) {
      if ((2.0 * maps[i].transpose() * cdir).norm() < 0.1) rows_ok = false;
    }
    if (rows_ok) break;
    if (tries > 200) throw Error("random_qp: could not draw a usable residual");
  }
  const double lambda_star = 0.08 + 0.04 * unit(rng);
  const Vec res = lambda_star * cdir;  // cost residual at the optimum

  // Planted optimum: a small range-space point, oriented so the coupled
  // row is violated at the cold start x = 0. Runs then begin strictly
  // infeasible and have to drive the violation out, instead of idling on a
  // seed that happens to start inside the feasible region.
  Vec vstar(m);
  for (int tries = 0;; ++tries) {
    for (int r = 0; r < m; ++r) vstar[r] = sym(rng);
    if (vstar.norm() > 1e-3 &&
        std::abs(cdir.dot(vstar)) > 0.3 * cdir.norm() * vstar.norm()) {
      break;
    }
    if (tries > 200) throw Error("random_qp: could not orient the optimum");
  }
  vstar *= (0.15 + 0.1 * unit(rng)) / vstar.norm();
  if (cdir.dot(vstar) > 0.0) vstar = -vstar;  // sum g(0) = -2 c.v* > 0

  const Vec stacked_star = stacked.transpose() * (vstar / kCurvature);

  inst.planted_x.resize(n);
  data.agents.resize(n);
  data.slater_points.resize(n);
  // Slater certificate: step from the optimum against the constraint
  // gradient; the coupled row drops by exactly 0.5 ||c||.
  const Vec slater_shift =
      stacked.transpose() * cdir * (0.25 / (kCurvature * cdir.norm()));
  for (int i = 0; i < n; ++i) {
    BuiltinAgent& agent = data.agents[i];
    agent.f_matrix = maps[i];
    agent.box = BoxSet{Vec::Constant(k, -1.0), Vec::Constant(k, 1.0)};

    inst.planted_x[i] = stacked_star.segment(i * k, k);

    const Vec a = 2.0 * maps[i].transpose() * cdir;
    agent.affine_g = AffineConstraint{Mat(1, k), Vec(1)};
    agent.affine_g->G.row(0) = a.transpose();
    agent.affine_g->h[0] = -a.dot(inst.planted_x[i]);

    data.slater_points[i] =
        inst.planted_x[i] - slater_shift.segment(i * k, k);
  }

  const Vec target = vstar + res;
  data.cost.Q = Mat::Identity(m, m);
  data.cost.q = -2.0 * target;
  data.cost.c = target.squaredNorm();
  data.q_tilde = 0.0;  // F >= 0 everywhere, so 0 lower-bounds the dual value
  data.delta = 1.0;

  inst.planted_value = res.squaredNorm();
  inst.planted_lambda = lambda_star;
  return inst;
}

}  // namespace pdp
