#include "ppife/quadrature.hpp"

#include <stdexcept>

namespace ppife {

namespace {

std::vector<TriRulePoint> make_tri_rule(int order) {
  std::vector<TriRulePoint> r;
  auto orbit3 = [&r](double a, double w) {
    const double b = 1.0 - 2.0 * a;
    r.push_back({a, a, b, w});
    r.push_back({a, b, a, w});
    r.push_back({b, a, a, w});
  };
  auto orbit6 = [&r](double a, double b, double w) {
    const double c = 1.0 - a - b;
    r.push_back({a, b, c, w});
    r.push_back({a, c, b, w});
    r.push_back({b, a, c, w});
    r.push_back({b, c, a, w});
    r.push_back({c, a, b, w});
    r.push_back({c, b, a, w});
  };
  switch (order) {
    case 1:
    case 2:
      // mid-edge rule
      orbit3(0.5, 1.0 / 3.0);
      break;
    case 3:
    case 4:
      orbit3(0.445948490915965, 0.223381589678011);
      orbit3(0.091576213509771, 0.109951743655322);
      break;
    case 5:
    case 6:
      orbit3(0.249286745170910, 0.116786275726379);
      orbit3(0.063089014491502, 0.050844906370207);
      orbit6(0.310352451033785, 0.636502499121399, 0.082851075618374);
      break;
    default:
      throw std::invalid_argument("triangle_rule: unsupported order");
  }
  return r;
}

std::vector<SegRulePoint> make_seg_rule(int npts) {
  // Gauss-Legendre nodes/weights on [-1,1]
  std::vector<std::pair<double, double>> gl;
  switch (npts) {
    case 3:
      gl = {{-0.774596669241483377, 5.0 / 9.0},
            {0.0, 8.0 / 9.0},
            {0.774596669241483377, 5.0 / 9.0}};
      break;
    case 5:
      gl = {{-0.906179845938663993, 0.236926885056189088},
            {-0.538469310105683091, 0.478628670499366468},
            {0.0, 0.568888888888888889},
            {0.538469310105683091, 0.478628670499366468},
            {0.906179845938663993, 0.236926885056189088}};
      break;
    case 7:
      gl = {{-0.949107912342758525, 0.129484966168869693},
            {-0.741531185599394440, 0.279705391489276668},
            {-0.405845151377397167, 0.381830050505118945},
            {0.0, 0.417959183673469388},
            {0.405845151377397167, 0.381830050505118945},
            {0.741531185599394440, 0.279705391489276668},
            {0.949107912342758525, 0.129484966168869693}};
      break;
    default:
      throw std::invalid_argument("segment_rule: unsupported point count");
  }
  std::vector<SegRulePoint> r;
  r.reserve(gl.size());
  for (auto [t, w] : gl) r.push_back({0.5 * (t + 1.0), 0.5 * w});
  return r;
}

}  // namespace

const std::vector<TriRulePoint>& triangle_rule(int order) {
  static const std::vector<TriRulePoint> r2 = make_tri_rule(2);
  static const std::vector<TriRulePoint> r4 = make_tri_rule(4);
  static const std::vector<TriRulePoint> r6 = make_tri_rule(6);
  switch (order) {
    case 1:
    case 2:
      return r2;
    case 3:
    case 4:
      return r4;
    case 5:
    case 6:
      return r6;
    default:
      throw std::invalid_argument("triangle_rule: unsupported order");
  }
}

const std::vector<SegRulePoint>& segment_rule(int npts) {
  static const std::vector<SegRulePoint> r3 = make_seg_rule(3);
  static const std::vector<SegRulePoint> r5 = make_seg_rule(5);
  static const std::vector<SegRulePoint> r7 = make_seg_rule(7);
  switch (npts) {
    case 3:
      return r3;
    case 5:
      return r5;
    case 7:
      return r7;
    default:
      throw std::invalid_argument("segment_rule: unsupported point count");
  }
}

double integrate_triangle(const std::array<Vec2, 3>& tri, int order,
                          const std::function<double(Vec2)>& f) {
  const double area = 0.5 * cross(tri[1] - tri[0], tri[2] - tri[0]);
  double s = 0.0;
  for (const auto& q : triangle_rule(order)) s += q.w * f(bary_point(tri, q));
  return s * area;
}

double integrate_segment(Vec2 a, Vec2 b, int npts,
                         const std::function<double(Vec2)>& f) {
  const double len = norm(b - a);
  double s = 0.0;
  for (const auto& q : segment_rule(npts)) s += q.w * f(a + (b - a) * q.t);
  return s * len;
}

}  // namespace ppife
