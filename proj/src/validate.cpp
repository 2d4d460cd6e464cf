#include "pdp/validate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "pdp/numdiff.hpp"

namespace pdp {
namespace {

constexpr double kDerivTol = 1e-4;    // finite-difference agreement
constexpr double kProjTol = 1e-9;     // idempotency, membership
constexpr double kLipSlack = 1e-6;    // relative slack on declared constants
constexpr double kGammaTol = 1e-8;

struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(unsigned seed) : rng(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }

  // Raw draw inside the agent's hull box (or a set-radius box), then
  // projected so the sample is feasible.
  Vec feasible_point(const AgentFunctions& agent, int k) {
    Vec raw(k);
    if (agent.hull_lo.size() == k && agent.hull_hi.size() == k) {
      for (int j = 0; j < k; ++j) raw[j] = uniform(agent.hull_lo[j], agent.hull_hi[j]);
    } else {
      const double r = agent.set_radius > 0.0 ? agent.set_radius : 1.0;
      for (int j = 0; j < k; ++j) raw[j] = uniform(-r, r);
    }
    return agent.project(raw);
  }
};

void expect_size(const Vec& v, Eigen::Index want, const char* what) {
  if (v.size() != want) {
    std::ostringstream msg;
    msg << what << ": got size " << v.size() << ", want " << want;
    throw DimensionMismatch(msg.str());
  }
}

void expect_shape(const Mat& m, Eigen::Index rows, Eigen::Index cols,
                  const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream msg;
    msg << what << ": got " << m.rows() << "x" << m.cols() << ", want " << rows
        << "x" << cols;
    throw DimensionMismatch(msg.str());
  }
}

}  // namespace

bool ValidationReport::ok() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const CheckResult& c) { return c.passed; });
}

const CheckResult* ValidationReport::failure(CheckCode code) const {
  for (const CheckResult& c : entries) {
    if (c.code == code && !c.passed) return &c;
  }
  return nullptr;
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const CheckResult& c : entries) {
    out << (c.passed ? "  ok    " : "  FAIL  ") << c.name << "  (value "
        << c.value << ", limit " << c.limit << ")";
    if (!c.detail.empty()) out << "  " << c.detail;
    out << "\n";
  }
  return out.str();
}

void ValidationReport::require() const {
  for (const CheckResult& c : entries) {
    if (c.passed) continue;
    const std::string msg = c.name + ": " + c.detail;
    switch (c.code) {
      case CheckCode::Dimensions:
      case CheckCode::CallbackShapes:
        throw DimensionMismatch(msg);
      case CheckCode::ModeCallbacks:
        throw ModeMismatch(msg);
      case CheckCode::SlaterPoint:
      case CheckCode::SlaterGamma:
        throw SlaterViolation(msg);
      case CheckCode::CostGradient:
      case CheckCode::MapJacobian:
      case CheckCode::ConstraintJacobian:
        throw GradientMismatch(msg);
      default:
        throw Error(msg);
    }
  }
}

ValidationReport validate_problem(const ProblemSpec& spec, unsigned seed,
                                  int num_samples) {
  ValidationReport report;
  auto add = [&report](CheckCode code, const std::string& name, bool passed,
                       double value, double limit, std::string detail = "") {
    report.entries.push_back(
        {code, name, passed, value, limit, std::move(detail)});
  };

  const int n = spec.dims.num_agents;
  const int k = spec.dims.primal_dim;
  const int m = spec.dims.map_dim;
  const int p = spec.dims.constraint_dim;

  {
    const bool dims_ok = n >= 1 && k >= 1 && m >= 1 && p >= 1 &&
                         static_cast<int>(spec.agents.size()) == n;
    std::ostringstream detail;
    detail << "N=" << n << " K=" << k << " M=" << m << " P=" << p
           << " agents=" << spec.agents.size();
    add(CheckCode::Dimensions, "dimensions", dims_ok,
        std::min({n, k, m, p}), 1, detail.str());
    if (!dims_ok) return report;
  }

  for (int i = 0; i < n; ++i) {
    const AgentFunctions& a = spec.agents[i];
    const bool has_core = a.f && a.f_jacobian && a.g && a.project;
    const bool has_mode = static_cast<bool>(a.g_jacobian) ||
                          (a.g_prox && a.g_subgradient);
    if (!has_core || !has_mode) {
      add(CheckCode::ModeCallbacks, "mode callbacks", false, i, 0,
          "agent " + std::to_string(i) +
              " must provide f, f_jacobian, g, project and either "
              "g_jacobian or g_prox+g_subgradient");
      return report;
    }
  }
  add(CheckCode::ModeCallbacks, "mode callbacks", true, 0, 0);

  Sampler sampler(seed);
  const int per_agent = std::max(4, num_samples);

  // Feasible samples per agent, reused by every later check.
  std::vector<std::vector<Vec>> samples(n);
  for (int i = 0; i < n; ++i) {
    samples[i].reserve(per_agent);
    for (int s = 0; s < per_agent; ++s) {
      samples[i].push_back(sampler.feasible_point(spec.agents[i], k));
    }
  }

  // Shape checks on one sample per agent; these throw rather than report
  // because nothing numeric is trustworthy after a shape violation.
  for (int i = 0; i < n; ++i) {
    const AgentFunctions& a = spec.agents[i];
    const Vec& x = samples[i][0];
    expect_size(a.f(x), m, "f_i");
    expect_shape(a.f_jacobian(x), m, k, "f_i Jacobian");
    expect_size(a.g(x), p, "g_i");
    if (a.g_jacobian) expect_shape(a.g_jacobian(x), p, k, "g_i Jacobian");
    if (a.g_subgradient) expect_shape(a.g_subgradient(x), p, k, "g_i subgradient");
    expect_size(a.project(x), k, "projection");
    if (a.g_prox) {
      Vec w = Vec::Constant(p, 0.5);
      expect_size(a.g_prox(x, w, 0.1), k, "g_i prox");
    }
  }
  add(CheckCode::CallbackShapes, "callback shapes", true, 0, 0);

  // Gradient of F against central differences, on reachable inputs: sums of
  // f_i over feasible samples and scaled convex combinations matching what
  // consensus iterates feed the solver.
  {
    double worst = 0.0;
    for (int s = 0; s + 1 < per_agent; ++s) {
      std::vector<Vec> xs(n);
      for (int i = 0; i < n; ++i) xs[i] = samples[i][s];
      const Vec u = sum_f(spec, xs);
      worst = std::max(worst,
                       rel_error(spec.cost.grad(u),
                                 central_diff_gradient(spec.cost.eval, u)));
    }
    add(CheckCode::CostGradient, "cost gradient vs finite differences",
        worst <= kDerivTol, worst, kDerivTol);
  }

  // Agent derivative checks.
  {
    double worst_f = 0.0, worst_g = 0.0;
    bool any_g = false;
    for (int i = 0; i < n; ++i) {
      const AgentFunctions& a = spec.agents[i];
      for (int s = 0; s < std::min(per_agent, 8); ++s) {
        const Vec& x = samples[i][s];
        worst_f = std::max(
            worst_f, rel_error(a.f_jacobian(x), central_diff_jacobian(a.f, x)));
        if (a.g_jacobian) {
          any_g = true;
          worst_g = std::max(
              worst_g, rel_error(a.g_jacobian(x), central_diff_jacobian(a.g, x)));
        }
      }
    }
    add(CheckCode::MapJacobian, "f_i Jacobian vs finite differences",
        worst_f <= kDerivTol, worst_f, kDerivTol);
    if (any_g) {
      add(CheckCode::ConstraintJacobian, "g_i Jacobian vs finite differences",
          worst_g <= kDerivTol, worst_g, kDerivTol);
    }
  }

  // Projection laws and the declared set radius.
  {
    double worst_idem = 0.0, worst_expand = 0.0, worst_radius = 0.0;
    for (int i = 0; i < n; ++i) {
      const AgentFunctions& a = spec.agents[i];
      for (int s = 0; s + 1 < per_agent; ++s) {
        const Vec& x = samples[i][s];
        const Vec& y = samples[i][s + 1];
        worst_idem = std::max(worst_idem, (a.project(x) - x).norm());
        const double dist = (x - y).norm();
        if (dist > 1e-12) {
          Vec rx(k), ry(k);
          for (int j = 0; j < k; ++j) {
            rx[j] = x[j] + sampler.uniform(-1.0, 1.0);
            ry[j] = y[j] + sampler.uniform(-1.0, 1.0);
          }
          worst_expand =
              std::max(worst_expand, (a.project(rx) - a.project(ry)).norm() -
                                         (rx - ry).norm());
        }
        if (a.set_radius > 0.0) {
          worst_radius = std::max(worst_radius, x.norm() - a.set_radius);
        }
      }
    }
    add(CheckCode::ProjectionIdempotent, "projection idempotent",
        worst_idem <= kProjTol, worst_idem, kProjTol);
    add(CheckCode::ProjectionNonexpansive, "projection nonexpansive",
        worst_expand <= kProjTol, worst_expand, kProjTol);
    add(CheckCode::SetRadius, "samples within set radius",
        worst_radius <= kProjTol, worst_radius, kProjTol);
  }

  // Slater certificate.
  {
    const bool count_ok = static_cast<int>(spec.slater.points.size()) == n;
    double margin = 0.0;
    if (count_ok) {
      margin = slater_margin(spec);
    }
    add(CheckCode::SlaterPoint, "Slater point strictly feasible",
        count_ok && margin > 0.0, -margin, 0.0,
        count_ok ? "" : "certificate has wrong number of points");
    const double gamma_err = std::abs(margin - spec.slater.gamma);
    add(CheckCode::SlaterGamma, "declared gamma matches recomputed margin",
        count_ok && spec.slater.gamma > 0.0 &&
            gamma_err <= kGammaTol * std::max(1.0, std::abs(margin)),
        gamma_err, kGammaTol);
  }

  // Declared constants against sampled evidence. Every declared value must
  // dominate what the samples exhibit; generous constants are fine.
  {
    double worst_gf = 0.0;      // Lipschitz ratio of grad F
    double worst_lf_cost = 0.0; // ||grad F|| on reachable inputs
    double worst_fbar = 0.0;    // Lipschitz ratio of grad Fbar
    std::vector<Vec> prev_xs, prev_grad_terms;
    Vec prev_u;
    Vec prev_fbar_grad;
    for (int s = 0; s < per_agent; ++s) {
      std::vector<Vec> xs(n);
      for (int i = 0; i < n; ++i) xs[i] = samples[i][s];
      const Vec u = sum_f(spec, xs);
      const Vec gu = spec.cost.grad(u);
      worst_lf_cost = std::max(worst_lf_cost, gu.norm());
      // Consensus feeds the cost gradient N * (convex mix of f values);
      // probe a random mix of the two most recent sample rows.
      if (s > 0) {
        const double w = sampler.uniform(0.0, 1.0);
        Vec mix = Vec::Zero(m);
        for (int i = 0; i < n; ++i) {
          mix += w * spec.agents[i].f(xs[i]) +
                 (1.0 - w) * spec.agents[i].f(prev_xs[i]);
        }
        worst_lf_cost = std::max(worst_lf_cost, spec.cost.grad(mix).norm());
        const double du = (u - prev_u).norm();
        if (du > 1e-9) {
          worst_gf = std::max(
              worst_gf, (gu - spec.cost.grad(prev_u)).norm() / du);
        }
      }
      // grad Fbar blockwise.
      std::vector<Vec> grad_terms(n);
      for (int i = 0; i < n; ++i) {
        grad_terms[i] = spec.agents[i].f_jacobian(xs[i]).transpose() * gu;
      }
      if (s > 0) {
        double dx2 = 0.0, dg2 = 0.0;
        for (int i = 0; i < n; ++i) {
          dx2 += (xs[i] - prev_xs[i]).squaredNorm();
          dg2 += (grad_terms[i] - prev_grad_terms[i]).squaredNorm();
        }
        if (dx2 > 1e-18) {
          worst_fbar = std::max(worst_fbar, std::sqrt(dg2 / dx2));
        }
      }
      prev_xs = xs;
      prev_u = u;
      prev_grad_terms = grad_terms;
    }
    add(CheckCode::CostGradLipschitz, "G_F dominates sampled curvature",
        worst_gf <= spec.cost.grad_lipschitz * (1.0 + kLipSlack) + 1e-12,
        worst_gf, spec.cost.grad_lipschitz);
    add(CheckCode::CostGradBound, "L_F dominates sampled gradient norms",
        worst_lf_cost <= spec.cost.grad_bound * (1.0 + kLipSlack) + 1e-12,
        worst_lf_cost, spec.cost.grad_bound);
    add(CheckCode::FbarGradLipschitz, "G_Fbar dominates sampled curvature",
        worst_fbar <= spec.fbar_grad_lipschitz * (1.0 + kLipSlack) + 1e-12,
        worst_fbar, spec.fbar_grad_lipschitz);
  }

  {
    double worst_lf = 0.0, worst_lg = 0.0, worst_gg = 0.0;
    for (int i = 0; i < n; ++i) {
      const AgentFunctions& a = spec.agents[i];
      for (int s = 0; s + 1 < per_agent; ++s) {
        const Vec& x = samples[i][s];
        const Vec& y = samples[i][s + 1];
        const double dx = (x - y).norm();
        if (dx <= 1e-12) continue;
        const Vec df = a.f(x) - a.f(y);
        worst_lf = std::max(
            worst_lf, df.cwiseAbs().maxCoeff() / dx - a.f_lipschitz);
        const Vec dg = a.g(x) - a.g(y);
        worst_lg = std::max(
            worst_lg, dg.cwiseAbs().maxCoeff() / dx - a.g_lipschitz);
        if (a.g_jacobian) {
          const Mat jx = a.g_jacobian(x);
          const Mat jy = a.g_jacobian(y);
          for (int r = 0; r < p; ++r) {
            worst_gg = std::max(
                worst_gg,
                (jx.row(r) - jy.row(r)).norm() / dx - a.g_grad_lipschitz);
          }
        }
      }
    }
    add(CheckCode::MapLipschitz, "L_f dominates sampled f variation",
        worst_lf <= kLipSlack, worst_lf, 0.0);
    add(CheckCode::ConstraintLipschitz, "L_g dominates sampled g variation",
        worst_lg <= kLipSlack, worst_lg, 0.0);
    add(CheckCode::ConstraintGradLipschitz,
        "G_g dominates sampled constraint curvature", worst_gg <= kLipSlack,
        worst_gg, 0.0);
  }

  // Prox callbacks must land in X_i and beat the naive projected candidate.
  {
    bool any_prox = false;
    double worst_member = 0.0, worst_subopt = 0.0;
    for (int i = 0; i < n; ++i) {
      const AgentFunctions& a = spec.agents[i];
      if (!a.g_prox) continue;
      any_prox = true;
      for (int s = 0; s + 1 < per_agent; ++s) {
        const Vec v = samples[i][s] + 0.3 * (samples[i][s + 1] - samples[i][s]);
        Vec w(p);
        for (int r = 0; r < p; ++r) w[r] = sampler.uniform(0.0, 2.0);
        const double rho = sampler.uniform(0.05, 0.5);
        const Vec alpha = a.g_prox(v, w, rho);
        worst_member = std::max(worst_member, (a.project(alpha) - alpha).norm());
        auto prox_obj = [&](const Vec& z) {
          return w.dot(a.g(z)) + (z - v).squaredNorm() / (2.0 * rho);
        };
        worst_subopt = std::max(
            worst_subopt, prox_obj(alpha) - prox_obj(a.project(v)));
      }
    }
    if (any_prox) {
      add(CheckCode::ProxSanity, "prox output feasible and improving",
          worst_member <= kProjTol && worst_subopt <= 1e-10,
          std::max(worst_member, worst_subopt), kProjTol);
    }
  }

  return report;
}

}  // namespace pdp
