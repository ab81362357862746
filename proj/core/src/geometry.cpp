#include "ppife/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "ppife/quadrature.hpp"

namespace ppife {

Side classify_point(const LevelSet& geom, Vec2 x, double tol_iface) {
  const double v = geom.value(x);
  if (v > tol_iface) return Side::plus;
  if (v < -tol_iface) return Side::minus;
  return Side::interface;
}

Vec2 edge_intersection(const LevelSet& geom, Vec2 a, Vec2 b) {
  double fa = geom.value(a);
  double fb = geom.value(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw NoBracket();

  double lo = 0.0, hi = 1.0;
  // bisect the parameter until the bracket width is 1e-13 of the edge
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    const double fm = geom.value(a + (b - a) * mid);
    if (fm == 0.0) return a + (b - a) * mid;
    if ((fm > 0.0) == (fa > 0.0)) {
      lo = mid;
      fa = fm;
    } else {
      hi = mid;
      fb = fm;
    }
  }
  // one secant polish inside the final bracket
  double t = lo - fa * (hi - lo) / (fb - fa);
  t = std::clamp(t, lo, hi);
  return a + (b - a) * t;
}

CutSegment make_cut_segment(Vec2 D, Vec2 E, Vec2 plus_hint) {
  CutSegment seg;
  seg.D = D;
  seg.E = E;
  Vec2 n = normalized(rot90_ccw(E - D));
  if (dot(n, plus_hint) < 0.0) n = -n;
  seg.n_h = n;
  seg.t_h = rot90_cw(n);
  return seg;
}

CutSegment build_cut_segment(const LevelSet& geom,
                             const std::array<Vec2, 3>& tri) {
  std::vector<Vec2> roots;
  for (int e = 0; e < 3; ++e) {
    const Vec2 a = tri[e];
    const Vec2 b = tri[(e + 1) % 3];
    const double fa = geom.value(a);
    const double fb = geom.value(b);
    if (fa == 0.0 || fb == 0.0) continue;  // vertex handled by the caller
    if ((fa > 0.0) != (fb > 0.0)) roots.push_back(edge_intersection(geom, a, b));
  }
  if (roots.size() != 2)
    throw AssumptionAViolated(-1, 0, std::to_string(roots.size()) +
                                         " crossed edges (expected 2)");
  const Vec2 mid = (roots[0] + roots[1]) * 0.5;
  return make_cut_segment(roots[0], roots[1], geom.gradient(mid));
}

double polygon_area(const std::vector<Vec2>& poly) {
  double a = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % poly.size()];
    a += cross(p, q);
  }
  return 0.5 * a;
}

std::vector<Vec2> clip_polygon_halfplane(const std::vector<Vec2>& poly, Vec2 p0,
                                         Vec2 n, int keep, double on_tol) {
  std::vector<Vec2> out;
  const size_t m = poly.size();
  if (m == 0) return out;
  std::vector<double> d(m);
  for (size_t i = 0; i < m; ++i) {
    d[i] = keep * dot(poly[i] - p0, n);
    if (std::abs(d[i]) <= on_tol) d[i] = 0.0;
  }
  for (size_t i = 0; i < m; ++i) {
    const size_t j = (i + 1) % m;
    const bool in_i = d[i] >= 0.0;
    const bool in_j = d[j] >= 0.0;
    if (in_i) out.push_back(poly[i]);
    if (in_i != in_j && d[i] != 0.0 && d[j] != 0.0) {
      const double t = d[i] / (d[i] - d[j]);
      out.push_back(poly[i] + (poly[j] - poly[i]) * t);
    }
  }
  return out;
}

namespace {

// Fans a convex polygon (3 or 4 vertices) into triangles; quadrilaterals split
// along the shorter diagonal.
void fan_polygon(const std::vector<Vec2>& poly, Side tag,
                 std::vector<TaggedTri>& out) {
  if (poly.size() < 3) return;
  if (poly.size() == 3) {
    out.push_back({{poly[0], poly[1], poly[2]}, tag});
    return;
  }
  if (poly.size() == 4) {
    if (norm_sq(poly[2] - poly[0]) <= norm_sq(poly[3] - poly[1])) {
      out.push_back({{poly[0], poly[1], poly[2]}, tag});
      out.push_back({{poly[0], poly[2], poly[3]}, tag});
    } else {
      out.push_back({{poly[0], poly[1], poly[3]}, tag});
      out.push_back({{poly[1], poly[2], poly[3]}, tag});
    }
    return;
  }
  for (size_t i = 1; i + 1 < poly.size(); ++i)
    out.push_back({{poly[0], poly[i], poly[i + 1]}, tag});
}

double tri_diameter(const std::array<Vec2, 3>& tri) {
  return std::max({norm(tri[1] - tri[0]), norm(tri[2] - tri[1]),
                   norm(tri[0] - tri[2])});
}

}  // namespace

std::vector<TaggedTri> split_triangle(const std::array<Vec2, 3>& tri,
                                      const CutSegment& seg) {
  const double tol = 1e-14 * tri_diameter(tri);
  const std::vector<Vec2> poly{tri[0], tri[1], tri[2]};
  std::vector<TaggedTri> out;
  fan_polygon(clip_polygon_halfplane(poly, seg.D, seg.n_h, +1, tol),
              Side::plus, out);
  fan_polygon(clip_polygon_halfplane(poly, seg.D, seg.n_h, -1, tol),
              Side::minus, out);
  // drop slivers produced by near-vertex crossings
  const double area = 0.5 * cross(tri[1] - tri[0], tri[2] - tri[0]);
  std::erase_if(out, [&](const TaggedTri& t) {
    return t.area() <= 1e-30 * area || t.area() <= 0.0;
  });
  return out;
}

CutPolygonQuadrature cut_quadrature(const std::array<Vec2, 3>& tri,
                                    const CutSegment& seg, int order) {
  CutPolygonQuadrature cq;
  cq.sub_tris = split_triangle(tri, seg);
  for (const auto& st : cq.sub_tris) {
    const double a = st.area();
    if (st.tag == Side::plus)
      cq.area_plus += a;
    else
      cq.area_minus += a;
  }
  const double area = 0.5 * cross(tri[1] - tri[0], tri[2] - tri[0]);
  if (std::min(cq.area_plus, cq.area_minus) < 1e-14 * area)
    throw DegenerateCut();
  const auto& rule = triangle_rule(order);
  for (const auto& st : cq.sub_tris) {
    const double a = st.area();
    for (const auto& q : rule)
      cq.points.push_back({bary_point(st.v, q), q.w * a, st.tag});
  }
  return cq;
}

namespace {

double param_or(const std::map<std::string, double>& p, const std::string& k,
                double fallback) {
  auto it = p.find(k);
  return it == p.end() ? fallback : it->second;
}

LevelSet make_circle(const std::map<std::string, double>& p) {
  const double r0 = param_or(p, "r0", 0.5);
  const Vec2 c{param_or(p, "cx", 0.0), param_or(p, "cy", 0.0)};
  LevelSet g;
  g.value = [r0, c](Vec2 x) { return norm(x - c) - r0; };
  g.gradient = [c](Vec2 x) {
    const Vec2 d = x - c;
    const double r = norm(d);
    return r > 0.0 ? d / r : Vec2{1.0, 0.0};
  };
  g.domain = Rect{{-1.0, -1.0}, {1.0, 1.0}};
  return g;
}

LevelSet make_line(const std::map<std::string, double>& p) {
  const double a = param_or(p, "a", 1.0);
  const double b = param_or(p, "b", 0.0);
  const double c = param_or(p, "c", 0.0);
  LevelSet g;
  g.value = [a, b, c](Vec2 x) { return a * x.x + b * x.y + c; };
  g.gradient = [a, b](Vec2) { return Vec2{a, b}; };
  g.domain = Rect{{-1.0, -1.0}, {1.0, 1.0}};
  return g;
}

// Non-convex petal curve: (3(x^2+y^2)-x)^2 - (x^2+y^2) + 0.02.
LevelSet make_flower(const std::map<std::string, double>& p) {
  const double shift = param_or(p, "shift", 0.02);
  LevelSet g;
  g.value = [shift](Vec2 x) {
    const double s = x.x * x.x + x.y * x.y;
    const double q = 3.0 * s - x.x;
    return q * q - s + shift;
  };
  g.gradient = [](Vec2 x) {
    const double s = x.x * x.x + x.y * x.y;
    const double q = 3.0 * s - x.x;
    return Vec2{2.0 * q * (6.0 * x.x - 1.0) - 2.0 * x.x,
                12.0 * q * x.y - 2.0 * x.y};
  };
  g.domain = Rect{{-1.0, -1.0}, {1.0, 1.0}};
  return g;
}

using Factory = std::function<LevelSet(const std::map<std::string, double>&)>;

std::map<std::string, Factory>& registry() {
  static std::map<std::string, Factory> reg{
      {"circle", make_circle}, {"line", make_line}, {"flower", make_flower}};
  return reg;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

LevelSet make_level_set(const std::string& name,
                        const std::map<std::string, double>& params) {
  std::lock_guard lock(registry_mutex());
  auto it = registry().find(name);
  if (it == registry().end())
    throw Error("unknown level set: " + name);
  return it->second(params);
}

void register_level_set(const std::string& name, Factory factory) {
  std::lock_guard lock(registry_mutex());
  registry()[name] = std::move(factory);
}

std::vector<std::string> registered_level_sets() {
  std::lock_guard lock(registry_mutex());
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

}  // namespace ppife
