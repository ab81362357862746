#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "ppife/errors.hpp"
#include "ppife/geometry.hpp"

namespace ppife {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double xx, double yy, double zz) : x(xx), y(yy), z(zz) {}

  Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(Vec3 o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
};

inline Vec3 operator*(double s, Vec3 v) { return v * s; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline double norm_sq(Vec3 a) { return dot(a, a); }
inline Vec3 normalized(Vec3 v) { return v / norm(v); }

using Tet = std::array<Vec3, 4>;

inline double tet_volume(const Tet& t) {
  return std::abs(dot(cross(t[1] - t[0], t[2] - t[0]), t[3] - t[0])) / 6.0;
}
inline double tet_diameter(const Tet& t) {
  double d = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) d = std::max(d, norm(t[i] - t[j]));
  return d;
}

struct Affine3 {
  double c = 0.0;
  Vec3 g;
  double operator()(Vec3 x) const { return c + dot(g, x); }
  Affine3 operator+(const Affine3& o) const { return {c + o.c, g + o.g}; }
  Affine3 operator-(const Affine3& o) const { return {c - o.c, g - o.g}; }
  Affine3 operator*(double s) const { return {c * s, g * s}; }
};

// A tetrahedron cut by a plane through xstar with unit normal n_h and an
// orthonormal in-plane frame (t1_h, t2_h); vol_plus/vol_minus are the
// sub-volumes carved by the plane.
struct TangentPlaneCut {
  Vec3 xstar;
  Vec3 n_h, t1_h, t2_h;
  double vol_plus = 0.0, vol_minus = 0.0;

  double plane_value(Vec3 x) const { return dot(x - xstar, n_h); }
  Side side_of(Vec3 x, double tol = 0.0) const {
    const double d = plane_value(x);
    if (d > tol) return Side::plus;
    if (d < -tol) return Side::minus;
    return Side::interface;
  }
};

// Builds the frame (t1 = normalized in-plane projection of the global axis
// least aligned with n, t2 = n x t1) and the exact plane sub-volumes.
TangentPlaneCut make_tangent_cut(const Tet& tet, Vec3 xstar, Vec3 normal);

struct PiecewiseAffine3 {
  Affine3 plus, minus;
  double eval(Vec3 x, Side s) const {
    return s == Side::minus ? minus(x) : plus(x);
  }
  Vec3 grad(Side s) const { return s == Side::minus ? minus.g : plus.g; }
};

struct HatBasis3 {
  std::array<Affine3, 4> lambda;
  double volume = 0.0;
};

// Barycentric coordinate functions of a non-degenerate tetrahedron.
HatBasis3 p1_hats_3d(const Tet& tet);

// Shape regularity gauge: uniqueness of the cut basis is guaranteed when all
// face angles and all dihedral angles are at most pi/2. Violations are
// reported, not fatal -- construction is still attempted.
struct AngleReport {
  double max_face_angle = 0.0;     // radians
  double max_dihedral_angle = 0.0; // radians
  bool ok = true;
};
AngleReport check_tet_angles(const Tet& tet);

struct IfeBasis3 {
  Tet tet;
  TangentPlaneCut cut;
  double beta_plus = 1.0, beta_minus = 1.0;
  std::array<PiecewiseAffine3, 4> phi;  // Kronecker nodal shape functions
  std::array<double, 4> w_nodal{};      // one-sided plane distance at vertices
  double mu = 0.0;     // normal derivative of the interpolated distance
  double denom = 1.0;  // correction denominator
  HatBasis3 hats;
  bool angle_ok = true;
};

// Closed-form piecewise-affine shape functions on a plane-cut tetrahedron:
// nodal interpolant plus a correction along the one-sided plane distance so
// that value, tangential derivatives and normal flux match across the plane.
// Throws SingularBasis when the correction denominator vanishes.
IfeBasis3 build_ife_basis_3d(const Tet& tet, const TangentPlaneCut& cut,
                             double beta_plus, double beta_minus);

// Expansion sum(nodal_i * phi_i).
PiecewiseAffine3 interpolate_3d(const IfeBasis3& basis,
                                const std::array<double, 4>& nodal);

// The four auxiliary fields with unit jump signatures at the cut plane: psi
// carries a unit value jump, upsilon a unit normal-flux jump, theta1/theta2
// unit tangential-derivative jumps; all vanish at the vertices.
struct Auxiliary3 {
  PiecewiseAffine3 psi, upsilon, theta1, theta2;
};
Auxiliary3 build_auxiliary_3d(const Tet& tet, const TangentPlaneCut& cut,
                              double beta_plus, double beta_minus);

enum class CutType { none, three_edge, four_edge };

// Counts sign-changing edges of the tetrahedron against the plane; vertices
// within 1e-12 * diameter of the plane snap onto it, and a snapped vertex
// with both signs still present is rejected as DegenerateCut.
CutType classify_cut_type(const Tet& tet, Vec3 point, Vec3 normal);

struct TaggedTet {
  Tet v;
  Side tag = Side::plus;
  double volume() const { return tet_volume(v); }
};

// Exact decomposition of the tetrahedron along the cut plane into tagged
// sub-tetrahedra (corner piece plus wedge, or two wedges).
std::vector<TaggedTet> split_tet(const Tet& tet, const TangentPlaneCut& cut);

// Symmetric Gauss rule on the reference tetrahedron, weights summing to one.
struct TetRulePoint {
  double b0, b1, b2, b3, w;
};
// order in {1,2,3}: 1-, 4- and 5-point rules exact to that degree.
const std::vector<TetRulePoint>& tet_rule(int order);

double integrate_tet(const Tet& tet, int order,
                     const std::function<double(Vec3)>& f);

// Smooth scalar field with gradient, used to describe curved surfaces.
struct ScalarField3 {
  std::function<double(Vec3)> value;
  std::function<Vec3(Vec3)> gradient;
};

// Integral of f over the part of the tetrahedron where the field has the
// given sign, by recursive octasection; leaves still straddling the zero set
// are resolved against the linearized (tangent-plane) cut, so the result is
// second-order accurate in the leaf size.
double integrate_tet_side(const Tet& tet, const ScalarField3& phi, Side side,
                          const std::function<double(Vec3)>& f,
                          int max_depth = 6);

}  // namespace ppife
