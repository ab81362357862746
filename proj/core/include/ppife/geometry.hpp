#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppife/errors.hpp"

namespace ppife {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double xx, double yy) : x(xx), y(yy) {}

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
inline double norm_sq(Vec2 a) { return dot(a, a); }
// counterclockwise quarter turn
inline Vec2 rot90_ccw(Vec2 v) { return {-v.y, v.x}; }
// clockwise quarter turn
inline Vec2 rot90_cw(Vec2 v) { return {v.y, -v.x}; }
inline Vec2 normalized(Vec2 v) { return v / norm(v); }

struct Rect {
  Vec2 lo{-1.0, -1.0};
  Vec2 hi{1.0, 1.0};
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  bool contains(Vec2 p, double tol = 0.0) const {
    return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol &&
           p.y <= hi.y + tol;
  }
};

// Interface curve as the zero set of a signed scalar function; positive on the
// outer region, negative on the enclosed one.
struct LevelSet {
  std::function<double(Vec2)> value;
  std::function<Vec2(Vec2)> gradient;
  Rect domain;
};

enum class Side : int { minus = -1, interface = 0, plus = 1 };

inline Side opposite(Side s) {
  return static_cast<Side>(-static_cast<int>(s));
}

Side classify_point(const LevelSet& geom, Vec2 x, double tol_iface = 0.0);

// Root of the level set on segment [a,b]; requires a sign bracket (or one
// endpoint already on the zero set). Bisection to a 1e-13*|ab| bracket, then
// one secant polish. Deterministic.
Vec2 edge_intersection(const LevelSet& geom, Vec2 a, Vec2 b);

// Straight cut of a triangle: segment DE plus the frame (n_h toward the
// positive side, t_h its clockwise quarter turn, parallel to E-D).
struct CutSegment {
  Vec2 D, E;
  Vec2 n_h, t_h;

  // signed distance to the cut line, positive on the plus side
  double line_value(Vec2 x) const { return dot(x - D, n_h); }
  Side side_of(Vec2 x, double tol = 0.0) const {
    const double d = line_value(x);
    if (d > tol) return Side::plus;
    if (d < -tol) return Side::minus;
    return Side::interface;
  }
};

// Assembles the frame from the two cut points; plus_hint orients n_h (any
// vector with positive component toward the positive side, e.g. the level-set
// gradient at the segment midpoint).
CutSegment make_cut_segment(Vec2 D, Vec2 E, Vec2 plus_hint);

// Cut segment of a triangle known to be crossed on exactly two edges.
CutSegment build_cut_segment(const LevelSet& geom,
                             const std::array<Vec2, 3>& tri);

double polygon_area(const std::vector<Vec2>& poly);

// Clips a convex polygon against the half plane {x : dot(x-p0,n)*keep >= 0}.
// Vertices within on_tol of the line are kept on both sides without spawning
// crossing points.
std::vector<Vec2> clip_polygon_halfplane(const std::vector<Vec2>& poly, Vec2 p0,
                                         Vec2 n, int keep, double on_tol);

struct TaggedTri {
  std::array<Vec2, 3> v;
  Side tag = Side::plus;
  double area() const { return 0.5 * cross(v[1] - v[0], v[2] - v[0]); }
};

// Splits a triangle along the cut line into tagged sub-triangles (the
// quadrilateral side is fanned along its shorter diagonal).
std::vector<TaggedTri> split_triangle(const std::array<Vec2, 3>& tri,
                                      const CutSegment& seg);

struct QuadPoint {
  Vec2 x;
  double w = 0.0;
  Side tag = Side::plus;
};

struct CutPolygonQuadrature {
  std::vector<TaggedTri> sub_tris;
  std::vector<QuadPoint> points;
  double area_plus = 0.0;
  double area_minus = 0.0;
};

// Gauss points over both sides of a cut triangle; order in {2,4,6}. Throws
// DegenerateCut when one side's area ratio is below 1e-14.
CutPolygonQuadrature cut_quadrature(const std::array<Vec2, 3>& tri,
                                    const CutSegment& seg, int order);

// Named level sets ("circle": params r0 (default 0.5), cx, cy; "line": params
// a,b,c for a*x+b*y+c; "flower": the quartic petal curve used by the variable
// coefficient study). Additional factories can be registered at runtime.
LevelSet make_level_set(const std::string& name,
                        const std::map<std::string, double>& params = {});
void register_level_set(
    const std::string& name,
    std::function<LevelSet(const std::map<std::string, double>&)> factory);
std::vector<std::string> registered_level_sets();

}  // namespace ppife
