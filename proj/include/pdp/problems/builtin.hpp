#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdp/problem.hpp"

namespace pdp {

// Data form of the problem families the tooling can serialize: quadratic
// global cost, linear agent maps, affine or l1 constraints, box or polytope
// local sets. to_spec() turns the data into callbacks and derives every
// Lipschitz constant from the matrices.

struct QuadraticCost {
  Mat Q;  // symmetric PSD; F(u) = u^T Q u + q^T u + c
  Vec q;
  double c = 0.0;
};

struct AffineConstraint {
  Mat G;  // g(x) = G x + h
  Vec h;
};

struct L1Constraint {
  double offset = 0.0;  // g(x) = ||x||_1 - offset, scalar (P = 1)
};

struct BoxSet {
  Vec lo, hi;
};

struct PolytopeSet {
  Mat A;  // {x in [lo, hi] : A x <= b}
  Vec b;
  Vec lo, hi;
};

struct BuiltinAgent {
  Mat f_matrix;  // f_i(x) = A_i x
  std::optional<AffineConstraint> affine_g;
  std::optional<L1Constraint> l1_g;
  std::optional<BoxSet> box;
  std::optional<PolytopeSet> polytope;
};

struct BuiltinProblem {
  std::string name;
  std::string cache_key;
  Dimensions dims;
  QuadraticCost cost;
  std::vector<BuiltinAgent> agents;
  std::vector<Vec> slater_points;
  double q_tilde = 0.0;
  double delta = 1.0;
};

// Componentwise shrink toward zero by t >= 0.
Vec soft_threshold(const Vec& v, double t);

// Instantiates callbacks, projections, the l1 prox (clipped soft threshold)
// and all declared constants (L_f, L_g, G_g, D_x, G_F, L_F, G_Fbar, gamma).
ProblemSpec to_spec(const BuiltinProblem& data);

}  // namespace pdp
