#include "pdp/problems/builtin.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace pdp {
namespace {

double spectral_norm(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const Mat gram = a.cols() <= a.rows() ? Mat(a.transpose() * a)
                                        : Mat(a * a.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

double max_row_norm(const Mat& a) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    worst = std::max(worst, a.row(r).norm());
  }
  return worst;
}

struct SetGeometry {
  Vec lo, hi;
  Projection project;
  double corner_radius = 0.0;
  bool exact_box = false;
};

SetGeometry set_geometry(const BuiltinAgent& agent, int k) {
  SetGeometry geo;
  if (agent.box && agent.polytope) {
    throw Error("agent declares both a box and a polytope set");
  }
  if (agent.box) {
    geo.lo = agent.box->lo;
    geo.hi = agent.box->hi;
    Vec lo = geo.lo, hi = geo.hi;
    geo.project = [lo, hi](const Vec& v) { return project_box(v, lo, hi); };
    geo.exact_box = true;
  } else if (agent.polytope) {
    geo.lo = agent.polytope->lo;
    geo.hi = agent.polytope->hi;
    Mat a = agent.polytope->A;
    Vec b = agent.polytope->b, lo = geo.lo, hi = geo.hi;
    geo.project = [a, b, lo, hi](const Vec& v) {
      return project_polytope(v, a, b, lo, hi);
    };
  } else {
    throw Error("agent declares no local set");
  }
  if (geo.lo.size() != k || geo.hi.size() != k ||
      (geo.hi - geo.lo).minCoeff() < 0.0) {
    throw DimensionMismatch("agent set bounds are malformed");
  }
  geo.corner_radius = geo.lo.cwiseAbs().cwiseMax(geo.hi.cwiseAbs()).norm();
  return geo;
}

}  // namespace

Vec soft_threshold(const Vec& v, double t) {
  Vec out(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    out[j] = std::max(v[j] - t, 0.0) - std::max(-v[j] - t, 0.0);
  }
  return out;
}

ProblemSpec to_spec(const BuiltinProblem& data) {
  const int n = data.dims.num_agents;
  const int k = data.dims.primal_dim;
  const int m = data.dims.map_dim;
  const int p = data.dims.constraint_dim;
  if (static_cast<int>(data.agents.size()) != n) {
    throw DimensionMismatch("agent data count does not match num_agents");
  }
  if (data.cost.Q.rows() != m || data.cost.Q.cols() != m ||
      data.cost.q.size() != m) {
    throw DimensionMismatch("quadratic cost dimensions do not match map_dim");
  }

  ProblemSpec spec;
  spec.dims = data.dims;
  spec.name = data.name;
  spec.cache_key = data.cache_key;

  // Cost callbacks on the symmetrized quadratic.
  auto qs = std::make_shared<Mat>(0.5 * (data.cost.Q + data.cost.Q.transpose()));
  auto qlin = std::make_shared<Vec>(data.cost.q);
  const double qconst = data.cost.c;
  Eigen::SelfAdjointEigenSolver<Mat> qeig(*qs);
  const double q_lambda_max = std::max(0.0, qeig.eigenvalues().maxCoeff());
  if (qeig.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, q_lambda_max)) {
    throw Error("quadratic cost is not positive semidefinite");
  }
  spec.cost.eval = [qs, qlin, qconst](const Vec& u) {
    return u.dot(*qs * u) + qlin->dot(u) + qconst;
  };
  spec.cost.grad = [qs, qlin](const Vec& u) -> Vec {
    return 2.0 * (*qs * u) + *qlin;
  };
  spec.cost.grad_lipschitz = 2.0 * q_lambda_max;

  Mat gram_sum = Mat::Zero(m, m);  // sum_i A_i A_i^T, for ||J||_2
  double max_map_reach = 0.0;      // max_i sup_{x in X_i} ||f_i(x)||
  spec.agents.resize(n);
  for (int i = 0; i < n; ++i) {
    const BuiltinAgent& src = data.agents[i];
    AgentFunctions& dst = spec.agents[i];
    if (src.f_matrix.rows() != m || src.f_matrix.cols() != k) {
      throw DimensionMismatch("f matrix has wrong shape");
    }
    auto fa = std::make_shared<Mat>(src.f_matrix);
    dst.f = [fa](const Vec& x) -> Vec { return *fa * x; };
    dst.f_jacobian = [fa](const Vec&) -> Mat { return *fa; };
    dst.f_lipschitz = max_row_norm(*fa);
    gram_sum.noalias() += *fa * fa->transpose();

    SetGeometry geo = set_geometry(src, k);
    dst.project = geo.project;
    dst.hull_lo = geo.lo;
    dst.hull_hi = geo.hi;
    dst.hull_exact = geo.exact_box;
    dst.set_radius = geo.corner_radius;
    max_map_reach =
        std::max(max_map_reach, spectral_norm(*fa) * geo.corner_radius);

    if (src.affine_g && src.l1_g) {
      throw Error("agent declares both affine and l1 constraints");
    }
    if (src.affine_g) {
      if (src.affine_g->G.rows() != p || src.affine_g->G.cols() != k ||
          src.affine_g->h.size() != p) {
        throw DimensionMismatch("affine constraint has wrong shape");
      }
      auto gmat = std::make_shared<Mat>(src.affine_g->G);
      auto goff = std::make_shared<Vec>(src.affine_g->h);
      dst.g = [gmat, goff](const Vec& x) -> Vec { return *gmat * x + *goff; };
      dst.g_jacobian = [gmat](const Vec&) -> Mat { return *gmat; };
      dst.g_subgradient = dst.g_jacobian;
      // Isotropic prox of a linear function over a convex set is the
      // projected gradient point, exactly.
      Projection proj = geo.project;
      dst.g_prox = [gmat, proj](const Vec& v, const Vec& w, double rho) -> Vec {
        return proj(v - rho * (gmat->transpose() * w));
      };
      dst.g_lipschitz = max_row_norm(*gmat);
      dst.g_grad_lipschitz = 0.0;
    } else if (src.l1_g) {
      if (p != 1) {
        throw DimensionMismatch("l1 constraint requires constraint_dim == 1");
      }
      if (!src.box) {
        throw Error("l1 constraint requires a box local set");
      }
      const double offset = src.l1_g->offset;
      dst.g = [offset](const Vec& x) -> Vec {
        Vec out(1);
        out[0] = x.lpNorm<1>() - offset;
        return out;
      };
      dst.g_subgradient = [](const Vec& x) -> Mat {
        Mat row(1, x.size());
        for (Eigen::Index j = 0; j < x.size(); ++j) {
          row(0, j) = x[j] > 0.0 ? 1.0 : (x[j] < 0.0 ? -1.0 : 0.0);
        }
        return row;
      };
      // Separable objective, so the box-constrained scalar minimizers are
      // the clamped soft-threshold points.
      Vec lo = geo.lo, hi = geo.hi;
      dst.g_prox = [lo, hi](const Vec& v, const Vec& w, double rho) -> Vec {
        return project_box(soft_threshold(v, w[0] * rho), lo, hi);
      };
      dst.g_lipschitz = std::sqrt(static_cast<double>(k));
      dst.g_grad_lipschitz = 0.0;
    } else {
      throw Error("agent declares no constraint");
    }
  }

  Eigen::SelfAdjointEigenSolver<Mat> jeig(gram_sum);
  const double j_norm2 = std::max(0.0, jeig.eigenvalues().maxCoeff());
  spec.fbar_grad_lipschitz = spec.cost.grad_lipschitz * j_norm2;
  const double reach = static_cast<double>(n) * max_map_reach;
  spec.cost.grad_bound =
      spec.cost.grad_lipschitz * reach + data.cost.q.norm();

  spec.slater.points = data.slater_points;
  spec.slater.q_tilde = data.q_tilde;
  spec.slater.slack_margin = data.delta;
  if (static_cast<int>(data.slater_points.size()) == n) {
    spec.slater.gamma = slater_margin(spec);
  }
  return spec;
}

}  // namespace pdp
