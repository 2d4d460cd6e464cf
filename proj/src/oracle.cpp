#include "pdp/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"
#include "pdp/numdiff.hpp"

namespace pdp {
namespace {

using Blocks = std::vector<Vec>;
using nlohmann::json;

Blocks block_project(const ProblemSpec& spec, const Blocks& v) {
  Blocks out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = spec.agents[i].project(v[i]);
  }
  return out;
}

Blocks fbar_gradient(const ProblemSpec& spec, const Blocks& xs) {
  const Vec w = spec.cost.grad(sum_f(spec, xs));
  Blocks g(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    g[i] = spec.agents[i].f_jacobian(xs[i]).transpose() * w;
  }
  return g;
}

// Stationarity is certified relative to the cost gradient magnitude at the
// solution; an absolute mapping target is meaningless across problem scales.
double stationarity_scale(const ProblemSpec& spec, const Blocks& xs) {
  const Blocks g = fbar_gradient(spec, xs);
  double acc = 0.0;
  for (const Vec& b : g) acc += b.squaredNorm();
  return std::max(1.0, std::sqrt(acc));
}

struct FistaResult {
  Blocks x;
  double step_lipschitz = 1.0;
  int iters = 0;
  double mapping_residual = std::numeric_limits<double>::infinity();
};

// Accelerated proximal gradient with backtracking on the smooth part and
// gradient-based adaptive restart. The prox callback receives the forward
// point and the step length. Stops on the composite gradient mapping norm.
// value_noise is the caller's absolute rounding floor for one objective
// evaluation: near a minimum of a function with large internal terms the
// value is tiny but its rounding error is not, and a sufficient-decrease
// slack taken relative to the current value makes the model test fail on
// pure noise, doubling the step Lipschitz estimate without bound.
FistaResult fista(const std::function<double(const Blocks&)>& value,
                  const std::function<Blocks(const Blocks&)>& grad,
                  const std::function<Blocks(const Blocks&, double)>& prox,
                  Blocks x0, int max_iters, double tol, double value_noise) {
  const std::size_t n = x0.size();
  FistaResult out;
  out.x = std::move(x0);
  Blocks yv = out.x;
  double t = 1.0;
  double L = 1.0;
  double value_scale = 1.0;
  for (out.iters = 1; out.iters <= max_iters; ++out.iters) {
    const double fy = value(yv);
    value_scale = std::max(value_scale, std::abs(fy));
    const Blocks gy = grad(yv);
    Blocks xn;
    for (;;) {
      Blocks fwd(n);
      for (std::size_t i = 0; i < n; ++i) fwd[i] = yv[i] - gy[i] / L;
      xn = prox(fwd, 1.0 / L);
      double q = fy;
      double dist2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const Vec d = xn[i] - yv[i];
        q += gy[i].dot(d);
        dist2 += d.squaredNorm();
      }
      q += 0.5 * L * dist2;
      if (value(xn) <= q + std::max(1e-12 * value_scale, value_noise)) break;
      L *= 2.0;
      if (L > 1e18) {
        throw InnerSolveFailure("fista: backtracking exhausted, the smooth "
                                "part does not behave like a gradient");
      }
    }

    const Blocks gx = grad(xn);
    Blocks fwd(n);
    for (std::size_t i = 0; i < n; ++i) fwd[i] = xn[i] - gx[i] / L;
    const Blocks xh = prox(fwd, 1.0 / L);
    double m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) m2 += (xn[i] - xh[i]).squaredNorm();
    out.mapping_residual = L * std::sqrt(m2);

    double ascent = 0.0;
    for (std::size_t i = 0; i < n; ++i) ascent += gy[i].dot(xn[i] - out.x[i]);
    if (ascent > 0.0) {
      t = 1.0;
      yv = xn;
    } else {
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      for (std::size_t i = 0; i < n; ++i) {
        yv[i] = xn[i] + ((t - 1.0) / tn) * (xn[i] - out.x[i]);
      }
      t = tn;
    }
    out.x = xn;
    out.step_lipschitz = L;
    if (out.mapping_residual <= tol) break;
    // Let the step estimate track local curvature instead of its historical
    // maximum; backtracking pushes it straight back up when too small.
    L = std::max(1e-8, 0.97 * L);
  }
  return out;
}

// Stacked bounds of the feasible region when every agent set is its own
// hull box. Returns false as soon as one agent has a more general set.
bool stacked_box(const ProblemSpec& spec, Vec& lo, Vec& hi) {
  const int k = spec.dims.primal_dim;
  lo.resize(spec.dims.num_agents * k);
  hi.resize(lo.size());
  for (int i = 0; i < spec.dims.num_agents; ++i) {
    const AgentFunctions& a = spec.agents[i];
    if (!a.hull_exact || a.hull_lo.size() != k || a.hull_hi.size() != k) {
      return false;
    }
    lo.segment(i * k, k) = a.hull_lo;
    hi.segment(i * k, k) = a.hull_hi;
  }
  return true;
}

// Projected Newton refinement for box-constrained inner problems. On the
// instances this oracle sees, the smooth part is piecewise quadratic, so a
// Newton step on the free coordinates lands on the minimizer of the current
// piece; an accelerated gradient method alone keeps rattling inside flat
// valleys and its gradient mapping bottoms out near sqrt(L * value_noise),
// orders of magnitude above tight targets.
//
// Hessian-vector products difference the gradient of a surrogate supplied by
// frozen_at: the caller's gradient with every piecewise selection (the
// positive-part clip of the penalty multiplier) pinned to its state at the
// anchor. Differencing the true gradient instead would cross the clip kinks,
// which at a degenerate solution sit within machine distance of the iterate,
// and the products would blend curvatures of neighboring pieces into a
// direction that belongs to no piece at all. The frozen surrogate matches
// the true gradient at the anchor and is affine, so any probe step measures
// the current piece exactly. Line search and acceptance use the true
// objective. Returns the final mapping residual, measured with the caller's
// step Lipschitz estimate so the certificate means the same thing with and
// without polishing.
using GradFn = std::function<Vec(const Vec&)>;

double polish_box_newton(const std::function<double(const Vec&)>& value,
                         const GradFn& grad,
                         const std::function<GradFn(const Vec&)>& frozen_at,
                         const Vec& lo, const Vec& hi, double lipschitz,
                         double target, double value_noise, Vec& x) {
  const Eigen::Index dim = x.size();
  const double step_l = std::max(lipschitz, 1e-8);
  const auto clamp = [&](const Vec& v) -> Vec {
    return v.cwiseMax(lo).cwiseMin(hi);
  };
  const auto mapres = [&](const Vec& xx, const Vec& g) {
    return step_l * (xx - clamp(xx - g / step_l)).norm();
  };

  double fx = value(x);
  Vec g = grad(x);
  double m = mapres(x, g);
  for (int round = 0; round < 40 && m > target; ++round) {
    // Coordinates pressed against a bound by the gradient stay fixed.
    std::vector<Eigen::Index> free;
    free.reserve(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double eps =
          1e-10 * (1.0 + std::max(std::abs(lo[j]), std::abs(hi[j])));
      const bool at_lo = x[j] - lo[j] <= eps && g[j] >= 0.0;
      const bool at_hi = hi[j] - x[j] <= eps && g[j] <= 0.0;
      if (!at_lo && !at_hi) free.push_back(j);
    }
    if (free.empty()) break;
    const Eigen::Index nf = static_cast<Eigen::Index>(free.size());

    // Conjugate gradients on the free block, matrix action by differencing.
    Vec r(nf);
    for (Eigen::Index j = 0; j < nf; ++j) r[j] = -g[free[j]];
    Vec sol = Vec::Zero(nf);
    Vec pdir = r;
    double rr = r.squaredNorm();
    const double rr_stop = 1e-24 * rr;
    const int cg_cap = static_cast<int>(std::min<Eigen::Index>(2 * nf + 10, 2000));
    const GradFn frozen = frozen_at(x);
    const Vec g_frozen = frozen(x);
    int cg_used = 0;
    const char* cg_exit = "res";
    for (int cg = 0; cg < cg_cap && rr > rr_stop; ++cg) {
      cg_used = cg + 1;
      Vec embedded = Vec::Zero(dim);
      for (Eigen::Index j = 0; j < nf; ++j) embedded[free[j]] = pdir[j];
      const double h =
          1e-2 * (1.0 + x.norm()) / std::max(embedded.norm(), 1e-30);
      const Vec hg = (frozen(x + h * embedded) - g_frozen) / h;
      Vec hp(nf);
      for (Eigen::Index j = 0; j < nf; ++j) hp[j] = hg[free[j]];
      const double curvature = pdir.dot(hp);
      if (curvature <= 1e-12 * pdir.squaredNorm()) {
        // Flat direction: fall back to steepest descent on the first pass.
        if (cg == 0) sol = r;
        cg_exit = "curv";
        break;
      }
      const double alpha = rr / curvature;
      sol += alpha * pdir;
      r -= alpha * hp;
      const double rr_next = r.squaredNorm();
      pdir = r + (rr_next / rr) * pdir;
      rr = rr_next;
      cg_exit = "tol";
    }

    Vec dir = Vec::Zero(dim);
    for (Eigen::Index j = 0; j < nf; ++j) dir[free[j]] = sol[j];
    bool accepted = false;
    double t = 1.0;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      const Vec xc = clamp(x + t * dir);
      const double fc = value(xc);
      const Vec gc = grad(xc);
      const double mc = mapres(xc, gc);
      // A value drop below the evaluation noise is not evidence of progress,
      // so it never justifies letting the mapping grow.
      const bool real_drop =
          fc < fx - std::max(1e-9 * (1.0 + std::abs(fx)), 8.0 * value_noise);
      if (mc < m || (real_drop && mc <= 2.0 * m)) {
        x = xc;
        fx = fc;
        g = gc;
        m = mc;
        accepted = true;
        break;
      }
    }
    if (std::getenv("PDP_ORACLE_TRACE")) {
      const Vec x1 = clamp(x + dir);
      std::fprintf(stderr,
                   "  polish round %d free %zu cg %d (%s) |dir| %.3g full-step "
                   "map %.3g acc %d val %.6g map %.3g\n",
                   round, free.size(), cg_used, cg_exit, dir.norm(),
                   mapres(x1, grad(x1)), accepted ? 1 : 0, fx, m);
    }
    if (!accepted) break;
  }
  return m;
}

ReferenceSolution solve_augmented_lagrangian(const ProblemSpec& spec,
                                             const OracleOptions& opts) {
  const int n = spec.dims.num_agents;
  const int p = spec.dims.constraint_dim;

  Blocks x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = spec.agents[i].project(Vec::Zero(spec.dims.primal_dim));
  }
  // One-evaluation rounding floor, anchored where the objective still has
  // its natural magnitude rather than at a minimizer where it may cancel
  // to zero.
  const double value_noise =
      1e-12 * std::max(1.0, std::abs(objective(spec, x)));
  const auto proj = [&](const Blocks& v, double) {
    return block_project(spec, v);
  };
  // Warm phase ignoring the coupled constraint.
  x = fista([&](const Blocks& xs) { return objective(spec, xs); },
            [&](const Blocks& xs) { return fbar_gradient(spec, xs); }, proj,
            std::move(x), 500, 1e-4, value_noise)
          .x;

  Vec box_lo, box_hi;
  const bool have_box = stacked_box(spec, box_lo, box_hi);

  Vec lam = Vec::Zero(p);
  double c = opts.penalty0;
  double feas_prev = std::numeric_limits<double>::infinity();
  double feas = feas_prev, compl_res = feas_prev, stat = feas_prev;
  double stat_prev = feas_prev;
  int stagnant = 0;
  for (int outer = 1; outer <= opts.max_outer; ++outer) {
    const auto val = [&](const Blocks& xs) {
      const Vec m = (lam + c * sum_g(spec, xs)).cwiseMax(0.0);
      return objective(spec, xs) +
             (m.squaredNorm() - lam.squaredNorm()) / (2.0 * c);
    };
    const auto grd = [&](const Blocks& xs) {
      const Vec w = spec.cost.grad(sum_f(spec, xs));
      const Vec m = (lam + c * sum_g(spec, xs)).cwiseMax(0.0);
      Blocks g(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const AgentFunctions& a = spec.agents[i];
        g[i] = a.f_jacobian(xs[i]).transpose() * w +
               a.g_jacobian(xs[i]).transpose() * m;
      }
      return g;
    };
    const double inner_tol = std::max(
        opts.tol, 1e-3 * std::pow(0.1, static_cast<double>(outer - 1)));
    // With the Newton polish available the first-order pass only has to get
    // close enough for the active pattern to settle.
    const double fista_tol = have_box ? std::max(inner_tol, 1e-4) : inner_tol;
    const FistaResult r =
        fista(val, grd, proj, x, opts.max_inner, fista_tol, value_noise);
    x = r.x;
    double stat_inner = r.mapping_residual;
    if (have_box && stat_inner > opts.tol) {
      const auto frozen_at = [&](const Vec& anchor) -> GradFn {
        const Vec sel = ((lam + c * sum_g(spec, unstack(spec, anchor)))
                             .array() > 0.0)
                            .cast<double>();
        return [&, sel](const Vec& v) {
          const Blocks xs = unstack(spec, v);
          const Vec w = spec.cost.grad(sum_f(spec, xs));
          const Vec mm =
              sel.cwiseProduct(lam + c * sum_g(spec, xs));
          Blocks gb(xs.size());
          for (std::size_t i = 0; i < xs.size(); ++i) {
            const AgentFunctions& a = spec.agents[i];
            gb[i] = a.f_jacobian(xs[i]).transpose() * w +
                    a.g_jacobian(xs[i]).transpose() * mm;
          }
          return stack(gb);
        };
      };
      Vec xv = stack(x);
      stat_inner = polish_box_newton(
          [&](const Vec& v) { return val(unstack(spec, v)); },
          [&](const Vec& v) { return stack(grd(unstack(spec, v))); },
          frozen_at, box_lo, box_hi, r.step_lipschitz, opts.tol, value_noise,
          xv);
      x = unstack(spec, xv);
    }
    if (std::getenv("PDP_ORACLE_TRACE")) {
      std::fprintf(stderr,
                   "outer %d c %.3g fista iters %d L %.3g map %.3g polished %.3g\n",
                   outer, c, r.iters, r.step_lipschitz, r.mapping_residual,
                   stat_inner);
    }

    const Vec sg = sum_g(spec, x);
    const Vec lam_new = (lam + c * sg).cwiseMax(0.0);
    feas = sg.cwiseMax(0.0).norm();
    compl_res = std::abs(lam_new.dot(sg));
    // The inner gradient at x already carries the multiplier (lam + c sg)^+,
    // which is exactly lam_new, so the inner mapping norm certifies
    // stationarity of the true Lagrangian at (x, lam_new).
    stat = stat_inner;

    if (feas <= opts.tol && compl_res <= 10.0 * opts.tol &&
        stat <= 10.0 * opts.tol * stationarity_scale(spec, x)) {
      ReferenceSolution out;
      out.xs = x;
      out.lambda = lam_new;
      out.value = objective(spec, x);
      out.feas_residual = feas;
      out.compl_residual = compl_res;
      out.stat_residual = stat;
      out.method = "augmented-lagrangian";
      out.outer_iters = outer;
      return out;
    }
    lam = lam_new;
    if (!(feas <= 0.25 * feas_prev)) c = std::min(2.0 * c, opts.penalty_cap);
    feas_prev = feas;
    // Only stationarity can improve once the primal residuals are met; give
    // up early when the inner solver has clearly hit its numeric floor.
    if (feas <= opts.tol && compl_res <= 10.0 * opts.tol &&
        stat > 0.9 * stat_prev) {
      if (++stagnant >= 3) break;
    } else {
      stagnant = 0;
    }
    stat_prev = stat;
  }
  std::ostringstream msg;
  msg << "solve_reference: augmented Lagrangian stalled after "
      << opts.max_outer << " multiplier updates (feasibility " << feas
      << ", complementarity " << compl_res << ", stationarity " << stat
      << " against target " << opts.tol << ")";
  throw NoConvergence(msg.str());
}

ReferenceSolution solve_dual_bisection(const ProblemSpec& spec,
                                       const OracleOptions& opts) {
  const int n = spec.dims.num_agents;
  Blocks x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = spec.agents[i].project(Vec::Zero(spec.dims.primal_dim));
  }
  const double value_noise =
      1e-12 * std::max(1.0, std::abs(objective(spec, x)));

  double last_stat = std::numeric_limits<double>::infinity();
  const auto inner = [&](double mu) {
    const auto prox = [&](const Blocks& v, double tau) {
      Blocks out(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = spec.agents[i].g_prox(v[i], Vec::Constant(1, mu), tau);
      }
      return out;
    };
    const FistaResult r =
        fista([&](const Blocks& xs) { return objective(spec, xs); },
              [&](const Blocks& xs) { return fbar_gradient(spec, xs); }, prox,
              x, opts.max_inner, 0.1 * opts.tol, value_noise);
    x = r.x;
    last_stat = r.mapping_residual;
    return sum_g(spec, x)[0];
  };
  const auto package = [&](double mu, double s, int outer) {
    ReferenceSolution out;
    out.xs = x;
    out.lambda = Vec::Constant(1, mu);
    out.value = objective(spec, x);
    out.feas_residual = std::max(s, 0.0);
    out.compl_residual = std::abs(mu * s);
    out.stat_residual = last_stat;
    out.method = "dual-bisection";
    out.outer_iters = outer;
    return out;
  };
  const auto certified = [&](double mu, double s) {
    return std::max(s, 0.0) <= opts.tol &&
           std::abs(mu * s) <= 10.0 * opts.tol &&
           last_stat <= 10.0 * opts.tol * stationarity_scale(spec, x);
  };

  double s0 = inner(0.0);
  if (certified(0.0, s0)) return package(0.0, s0, 1);
  if (s0 <= 0.0) {
    throw NoConvergence("solve_reference: constraint slack at zero "
                        "multiplier but the inner solve did not certify");
  }

  double lo = 0.0, hi = 1.0;
  int outer = 1;
  double s_hi = inner(hi);
  while (s_hi > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e18) {
      throw NoConvergence("solve_reference: multiplier bracket exploded; "
                          "the constraint looks infeasible");
    }
    s_hi = inner(hi);
    ++outer;
  }
  if (certified(hi, s_hi)) return package(hi, s_hi, outer);

  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double s_mid = inner(mid);
    ++outer;
    if (certified(mid, s_mid)) return package(mid, s_mid, outer);
    if (s_mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
  }
  throw NoConvergence("solve_reference: bisection on the scalar multiplier "
                      "did not certify the residual targets");
}

json vec_to_json(const Vec& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vec vec_from_json(const json& j) {
  const auto raw = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(raw.data(), static_cast<Eigen::Index>(raw.size()));
}

std::filesystem::path cache_path(const ProblemSpec& spec,
                                 const OracleOptions& opts) {
  return std::filesystem::path(opts.cache_dir) / (spec.cache_key + ".json");
}

// Projected-gradient mapping of the plain Lagrangian at (xs, lambda). Used
// to re-certify cached points: the stored stationarity number belongs to
// whatever instance produced the file, not necessarily to this one.
double lagrangian_mapping(const ProblemSpec& spec, const Blocks& xs,
                          const Vec& lam) {
  const Vec w = spec.cost.grad(sum_f(spec, xs));
  const double eta = 1.0 / std::max(1.0, spec.fbar_grad_lipschitz);
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const AgentFunctions& a = spec.agents[i];
    const Vec dir = a.f_jacobian(xs[i]).transpose() * w +
                    a.g_jacobian(xs[i]).transpose() * lam;
    acc += (xs[i] - a.project(xs[i] - eta * dir)).squaredNorm();
  }
  return std::sqrt(acc) / eta;
}

// A cached solution is only trusted after its residuals are recomputed from
// the stored point; stale or corrupt entries trigger a fresh solve.
bool load_cache(const ProblemSpec& spec, const OracleOptions& opts,
                ReferenceSolution& out) {
  std::ifstream in(cache_path(spec, opts));
  if (!in) return false;
  json j;
  try {
    in >> j;
    ReferenceSolution cand;
    cand.method = j.at("method").get<std::string>();
    cand.outer_iters = j.at("outer_iters").get<int>();
    cand.stat_residual = j.at("stat_residual").get<double>();
    cand.lambda = vec_from_json(j.at("lambda"));
    for (const json& block : j.at("xs")) cand.xs.push_back(vec_from_json(block));
    if (static_cast<int>(cand.xs.size()) != spec.dims.num_agents) return false;
    const Vec sg = sum_g(spec, cand.xs);
    cand.value = objective(spec, cand.xs);
    cand.feas_residual = sg.cwiseMax(0.0).norm();
    cand.compl_residual = std::abs(cand.lambda.dot(sg));
    bool smooth = true;
    for (const AgentFunctions& a : spec.agents) {
      if (!a.g_jacobian) smooth = false;
    }
    if (smooth) {
      cand.stat_residual = std::max(
          cand.stat_residual, lagrangian_mapping(spec, cand.xs, cand.lambda));
    }
    if (cand.feas_residual > opts.tol ||
        cand.compl_residual > 10.0 * opts.tol ||
        cand.stat_residual >
            10.0 * opts.tol * stationarity_scale(spec, cand.xs)) {
      return false;
    }
    out = std::move(cand);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

void store_cache(const ProblemSpec& spec, const OracleOptions& opts,
                 const ReferenceSolution& sol) {
  std::error_code ec;
  std::filesystem::create_directories(opts.cache_dir, ec);
  if (ec) return;
  json j;
  j["cache_key"] = spec.cache_key;
  j["method"] = sol.method;
  j["outer_iters"] = sol.outer_iters;
  j["value"] = sol.value;
  j["feas_residual"] = sol.feas_residual;
  j["compl_residual"] = sol.compl_residual;
  j["stat_residual"] = sol.stat_residual;
  j["lambda"] = vec_to_json(sol.lambda);
  json xs = json::array();
  for (const Vec& b : sol.xs) xs.push_back(vec_to_json(b));
  j["xs"] = std::move(xs);
  std::ofstream outf(cache_path(spec, opts));
  if (outf) outf << j.dump(2) << "\n";
}

bool lex_less(const Blocks& a, const Blocks& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int j = 0; j < a[i].size(); ++j) {
      if (a[i][j] < b[i][j]) return true;
      if (a[i][j] > b[i][j]) return false;
    }
  }
  return false;
}

}  // namespace

ReferenceSolution solve_reference(const ProblemSpec& spec,
                                  const OracleOptions& opts) {
  bool smooth = true, proxable = true;
  for (const AgentFunctions& a : spec.agents) {
    if (!a.g_jacobian) smooth = false;
    if (!a.g_prox) proxable = false;
  }

  const bool use_cache = !opts.cache_dir.empty() && !spec.cache_key.empty();
  if (use_cache) {
    ReferenceSolution cached;
    if (load_cache(spec, opts, cached)) return cached;
  }

  ReferenceSolution sol;
  if (smooth) {
    sol = solve_augmented_lagrangian(spec, opts);
  } else if (proxable && spec.dims.constraint_dim == 1) {
    sol = solve_dual_bisection(spec, opts);
  } else {
    throw ModeMismatch("solve_reference: needs g_jacobian on every agent, or "
                       "g_prox everywhere with a single constraint row");
  }
  if (use_cache) store_cache(spec, opts, sol);
  return sol;
}

GridSolution brute_force_grid(const ProblemSpec& spec, int points_per_dim,
                              double feasibility_slack) {
  const int n = spec.dims.num_agents;
  const int k = spec.dims.primal_dim;
  const int total = n * k;
  if (total > 4) {
    throw TooLarge("brute_force_grid: refusing more than 4 total dimensions");
  }
  if (points_per_dim < 2) {
    throw ConfigError("brute_force_grid: need at least 2 points per dimension");
  }

  Vec lo(total), hi(total);
  for (int i = 0; i < n; ++i) {
    const AgentFunctions& a = spec.agents[i];
    Vec alo, ahi;
    if (a.hull_lo.size() == k && a.hull_hi.size() == k) {
      alo = a.hull_lo;
      ahi = a.hull_hi;
    } else if (a.set_radius > 0.0) {
      alo = Vec::Constant(k, -a.set_radius);
      ahi = Vec::Constant(k, a.set_radius);
    } else {
      throw ConfigError("brute_force_grid: agent " + std::to_string(i) +
                        " has no hull bounds or set radius");
    }
    lo.segment(i * k, k) = alo;
    hi.segment(i * k, k) = ahi;
  }

  GridSolution best;
  best.value = std::numeric_limits<double>::infinity();
  std::vector<int> idx(total, 0);
  const double denom = static_cast<double>(points_per_dim - 1);
  for (;;) {
    ++best.candidates;
    Blocks cand(n);
    for (int i = 0; i < n; ++i) {
      Vec raw(k);
      for (int j = 0; j < k; ++j) {
        const int d = i * k + j;
        raw[j] = lo[d] + (hi[d] - lo[d]) * (idx[d] / denom);
      }
      cand[i] = spec.agents[i].project(raw);
    }
    if (sum_g(spec, cand).maxCoeff() <= feasibility_slack) {
      ++best.feasible;
      const double v = objective(spec, cand);
      if (!std::isfinite(best.value)) {
        best.value = v;
        best.xs = cand;
      } else {
        const double tie = 1e-15 * std::max(1.0, std::abs(best.value));
        if (v < best.value - tie ||
            (std::abs(v - best.value) <= tie && lex_less(cand, best.xs))) {
          best.value = v;
          best.xs = cand;
        }
      }
    }
    int d = 0;
    while (d < total && ++idx[d] == points_per_dim) {
      idx[d] = 0;
      ++d;
    }
    if (d == total) break;
  }
  if (best.feasible == 0) {
    throw NoConvergence("brute_force_grid: no grid point satisfied the "
                        "coupled constraint");
  }
  return best;
}

Vec prox_grid_oracle(const std::function<Vec(const Vec&)>& g, const Vec& v,
                     const Vec& w, double rho, const Vec& lo, const Vec& hi,
                     int points_per_dim) {
  const int k = static_cast<int>(v.size());
  if (k > 2) throw TooLarge("prox_grid_oracle: refusing more than 2 dims");
  if (lo.size() != k || hi.size() != k) {
    throw DimensionMismatch("prox_grid_oracle: bound sizes must match v");
  }
  if (rho <= 0.0) throw ConfigError("prox_grid_oracle: rho must be positive");
  if (points_per_dim < 2) {
    throw ConfigError("prox_grid_oracle: need at least 2 points per dimension");
  }

  Vec best;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<int> idx(k, 0);
  const double denom = static_cast<double>(points_per_dim - 1);
  for (;;) {
    Vec alpha(k);
    for (int j = 0; j < k; ++j) {
      alpha[j] = lo[j] + (hi[j] - lo[j]) * (idx[j] / denom);
    }
    const double val =
        w.dot(g(alpha)) + (alpha - v).squaredNorm() / (2.0 * rho);
    if (val < best_val) {
      best_val = val;
      best = alpha;
    }
    int d = 0;
    while (d < k && ++idx[d] == points_per_dim) {
      idx[d] = 0;
      ++d;
    }
    if (d == k) break;
  }
  return best;
}

double FdCheck::worst() const {
  return std::max(worst_cost, std::max(worst_map, worst_constraint));
}

FdCheck fd_check(const ProblemSpec& spec, unsigned seed, int samples,
                 double step) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  FdCheck out;
  for (int s = 0; s < samples; ++s) {
    Blocks xs(spec.dims.num_agents);
    for (int i = 0; i < spec.dims.num_agents; ++i) {
      const AgentFunctions& a = spec.agents[i];
      Vec raw(spec.dims.primal_dim);
      for (int j = 0; j < spec.dims.primal_dim; ++j) {
        double blo = -1.0, bhi = 1.0;
        if (a.hull_lo.size() == spec.dims.primal_dim &&
            a.hull_hi.size() == spec.dims.primal_dim) {
          blo = a.hull_lo[j];
          bhi = a.hull_hi[j];
        } else if (a.set_radius > 0.0) {
          blo = -a.set_radius;
          bhi = a.set_radius;
        }
        raw[j] = blo + (bhi - blo) * unit(rng);
      }
      xs[i] = a.project(raw);

      const Mat fd_j = central_diff_jacobian(a.f, xs[i], step);
      out.worst_map =
          std::max(out.worst_map, rel_error(fd_j, a.f_jacobian(xs[i])));
      if (a.g_jacobian) {
        const Mat fd_g = central_diff_jacobian(a.g, xs[i], step);
        out.worst_constraint = std::max(out.worst_constraint,
                                        rel_error(fd_g, a.g_jacobian(xs[i])));
      }
    }
    const Vec u = sum_f(spec, xs);
    const Vec fd_c = central_diff_gradient(spec.cost.eval, u, step);
    out.worst_cost = std::max(out.worst_cost, rel_error(fd_c, spec.cost.grad(u)));
  }
  return out;
}

}  // namespace pdp
