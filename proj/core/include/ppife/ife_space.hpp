#pragma once

#include <array>

#include "ppife/geometry.hpp"

namespace ppife {

// Affine scalar function c + g.x
struct Affine2 {
  double c = 0.0;
  Vec2 g{0.0, 0.0};

  double operator()(Vec2 x) const { return c + dot(g, x); }

  Affine2 operator+(const Affine2& o) const { return {c + o.c, g + o.g}; }
  Affine2 operator-(const Affine2& o) const { return {c - o.c, g - o.g}; }
  Affine2 operator*(double s) const { return {c * s, g * s}; }
};

// One shape function on a cut element: an affine piece per side of the cut
// line, continuous at the cut points with a matched weighted normal slope.
struct PiecewiseAffine {
  Affine2 plus, minus;

  double eval(Vec2 x, Side s) const {
    return s == Side::minus ? minus(x) : plus(x);
  }
  Vec2 grad(Side s) const { return s == Side::minus ? minus.g : plus.g; }
};

// Standard linear nodal basis on one triangle.
struct HatBasis {
  std::array<Affine2, 3> lambda;
  double area = 0.0;
};

HatBasis p1_hats(const std::array<Vec2, 3>& tri);

struct IfeBasis {
  std::array<Vec2, 3> tri;
  CutSegment seg;
  double beta_plus = 1.0, beta_minus = 1.0;  // effective side coefficients
  std::array<PiecewiseAffine, 3> phi;
  std::array<Side, 3> vertex_side;  // side of each vertex wrt the cut line
  double mu = 0.0;     // normal slope of the interpolated distance function
  double denom = 1.0;  // uniqueness margin; |denom| < 1e-12 is singular
  HatBasis hats;
};

// Closed-form construction: each shape function is its nodal interpolant plus
// a correction along the one-sided distance to the cut line. Throws
// SingularBasis when the correction denominator vanishes (impossible when the
// maximum angle is at most a right angle).
IfeBasis build_ife_basis(const std::array<Vec2, 3>& tri, const CutSegment& seg,
                         double beta_plus, double beta_minus);

// Variable-coefficient variant: pass the per-element averaged coefficients.
inline IfeBasis build_ife_basis_variable(const std::array<Vec2, 3>& tri,
                                         const CutSegment& seg,
                                         double beta_bar_plus,
                                         double beta_bar_minus) {
  return build_ife_basis(tri, seg, beta_bar_plus, beta_bar_minus);
}

inline double eval_basis(const IfeBasis& b, int i, Vec2 x, Side side) {
  return b.phi[i].eval(x, side);
}
inline Vec2 grad_basis(const IfeBasis& b, int i, Side side) {
  return b.phi[i].grad(side);
}

// Nodal expansion into a single piecewise affine function.
PiecewiseAffine expand(const IfeBasis& b, const std::array<double, 3>& nodal);

// Jump-signature building blocks for the interpolation error: all three
// vanish at the vertices; psi_D / psi_E carry a unit value jump at D / E with
// no flux jump, upsilon a unit flux jump with no value jump.
struct AuxiliaryTriple {
  PiecewiseAffine upsilon, psi_D, psi_E;
};

AuxiliaryTriple build_auxiliary(const std::array<Vec2, 3>& tri,
                                const CutSegment& seg, double beta_plus,
                                double beta_minus);

}  // namespace ppife
