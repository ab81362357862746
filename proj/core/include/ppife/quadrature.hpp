#pragma once

#include <array>
#include <functional>
#include <vector>

#include "ppife/geometry.hpp"

namespace ppife {

// Symmetric Gauss rule on the reference triangle, barycentric coordinates,
// weights summing to one (scale by the physical area).
struct TriRulePoint {
  double b0, b1, b2, w;
};

// order in {2,4,6}: 3-, 6- and 12-point rules exact to that polynomial degree.
const std::vector<TriRulePoint>& triangle_rule(int order);

// Gauss-Legendre rule mapped to [0,1], weights summing to one.
struct SegRulePoint {
  double t, w;
};

// npts in {3,5,7}: exact to degree 5, 9, 13.
const std::vector<SegRulePoint>& segment_rule(int npts);

inline Vec2 bary_point(const std::array<Vec2, 3>& tri, const TriRulePoint& q) {
  return tri[0] * q.b0 + tri[1] * q.b1 + tri[2] * q.b2;
}

double integrate_triangle(const std::array<Vec2, 3>& tri, int order,
                          const std::function<double(Vec2)>& f);

// Includes the segment length factor.
double integrate_segment(Vec2 a, Vec2 b, int npts,
                         const std::function<double(Vec2)>& f);

}  // namespace ppife
