#pragma once

#include <functional>

#include "ppife/geometry.hpp"

namespace ppife {

// Per-element data a lifted edge jump needs: the element frame, the cut
// sub-areas, the effective side coefficients, and the coefficient-field
// integrals over the two sub-regions (for constant coefficients these are
// beta times the areas).
struct LiftElem {
  Vec2 n_h, t_h;
  double area_plus = 0.0, area_minus = 0.0;
  double beta_plus = 1.0, beta_minus = 1.0;
  double int_beta_plus = 0.0, int_beta_minus = 0.0;
};

inline LiftElem make_lift_elem(Vec2 n_h, Vec2 t_h, double area_plus,
                               double area_minus, double beta_plus,
                               double beta_minus) {
  return {n_h,       t_h,        area_plus,
          area_minus, beta_plus, beta_minus,
          beta_plus * area_plus, beta_minus * area_minus};
}

// Edge geometry for the lift: endpoints, the interface crossing p splitting
// the edge into a plus and a minus sub-segment, and the edge normal n_e.
struct LiftEdge {
  Vec2 a, b;
  Vec2 p;
  Side side_ap = Side::plus;  // side tag of sub-segment [a,p]
  Vec2 n_e;
};

// The locally supported vector field representing an edge jump: on element i
// it is c_i * t_h + beta_minus * d_i * n_h over the plus sub-region and
// c_i * t_h + beta_plus * d_i * n_h over the minus one, zero elsewhere.
struct LiftingField {
  double c1 = 0.0, d1 = 0.0;
  double c2 = 0.0, d2 = 0.0;
};

// Constant-coefficient lift of a jump function given on the edge.
LiftingField lift_jump(const LiftEdge& edge, const LiftElem& e1,
                       const LiftElem& e2,
                       const std::function<double(Vec2)>& jump);

// Variable-coefficient lift; beta_h evaluates the coefficient field for a
// given side tag, and e1/e2 carry the averaged coefficients plus the true
// integrals of beta_h over the sub-regions.
LiftingField lift_jump_variable(
    const LiftEdge& edge, const LiftElem& e1, const LiftElem& e2,
    const std::function<double(Vec2)>& jump,
    const std::function<double(Vec2, Side)>& beta_h);

// Weighted volume inner product of two lifted fields sharing the same edge:
// the integral of beta_h r_u . r_v over the two supporting elements.
double lifting_inner(const LiftingField& u, const LiftingField& v,
                     const LiftElem& e1, const LiftElem& e2);

// Unweighted squared volume norm of a lifted field.
double lifting_norm_sq(const LiftingField& u, const LiftElem& e1,
                       const LiftElem& e2);

}  // namespace ppife
