#include <cmath>
#include <random>

#include "doctest.h"
#include "ppife/geometry.hpp"
#include "ppife/quadrature.hpp"

using namespace ppife;

namespace {

// independent root finder: scan for the first sign-change sub-interval, then
// bisect it far below the library tolerance
Vec2 scan_root(const LevelSet& geom, Vec2 a, Vec2 b, int nscan = 100000) {
  double va = geom.value(a);
  for (int k = 1; k <= nscan; ++k) {
    const double t = static_cast<double>(k) / nscan;
    const Vec2 x = a + (b - a) * t;
    const double vx = geom.value(x);
    if (va == 0.0) return a + (b - a) * ((k - 1.0) / nscan);
    if (va * vx <= 0.0) {
      double lo = (k - 1.0) / nscan, hi = t;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double vm = geom.value(a + (b - a) * mid);
        if (va * vm <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      return a + (b - a) * (0.5 * (lo + hi));
    }
    va = vx;
  }
  FAIL("no root found by scan");
  return a;
}

}  // namespace

TEST_CASE("named level sets: circle value, gradient and parameters") {
  const auto geom = make_level_set("circle", {{"r0", 0.4}, {"cx", 0.1}, {"cy", -0.2}});
  const Vec2 c{0.1, -0.2};
  std::mt19937 g(123);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int k = 0; k < 200; ++k) {
    const Vec2 x{u(g), u(g)};
    const double r = norm(x - c);
    // sign agrees with inside/outside
    CHECK(geom.value(x) * (r - 0.4) >= 0.0);
    // gradient against central differences
    const double eps = 1e-6;
    const Vec2 fd{(geom.value({x.x + eps, x.y}) - geom.value({x.x - eps, x.y})) /
                      (2 * eps),
                  (geom.value({x.x, x.y + eps}) - geom.value({x.x, x.y - eps})) /
                      (2 * eps)};
    CHECK(norm(fd - geom.gradient(x)) < 1e-6 * std::max(1.0, norm(fd)));
  }
  // zero on the circle itself
  for (int k = 0; k < 32; ++k) {
    const double th = 2.0 * M_PI * k / 32.0;
    const Vec2 x = c + Vec2{0.4 * std::cos(th), 0.4 * std::sin(th)};
    CHECK(std::abs(geom.value(x)) < 1e-14);
  }
}

TEST_CASE("named level sets: line and petal-curve gradients are consistent") {
  for (const auto& entry :
       std::vector<std::pair<std::string, std::map<std::string, double>>>{
           {"line", {{"a", 1.0}, {"b", -2.0}, {"c", 0.3}}},
           {"flower", {}}}) {
    const auto geom = make_level_set(entry.first, entry.second);
    std::mt19937 g(7);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (int k = 0; k < 200; ++k) {
      const Vec2 x{u(g), u(g)};
      const double eps = 1e-6;
      const Vec2 fd{
          (geom.value({x.x + eps, x.y}) - geom.value({x.x - eps, x.y})) /
              (2 * eps),
          (geom.value({x.x, x.y + eps}) - geom.value({x.x, x.y - eps})) /
              (2 * eps)};
      CHECK(norm(fd - geom.gradient(x)) < 1e-5 * std::max(1.0, norm(fd)));
    }
  }
}

TEST_CASE("level-set registry: built-ins present, custom factories register") {
  const auto names = registered_level_sets();
  const auto has = [&](const std::string& n) {
    for (const auto& s : names)
      if (s == n) return true;
    return false;
  };
  CHECK(has("circle"));
  CHECK(has("line"));
  CHECK(has("flower"));

  register_level_set("unit_test_vertical", [](const std::map<std::string, double>&) {
    LevelSet ls;
    ls.value = [](Vec2 x) { return x.x; };
    ls.gradient = [](Vec2) { return Vec2{1.0, 0.0}; };
    return ls;
  });
  const auto geom = make_level_set("unit_test_vertical");
  CHECK(geom.value({0.25, 0.0}) == 0.25);
  CHECK_THROWS_AS(make_level_set("no_such_curve"), Error);
}

TEST_CASE("edge_intersection agrees with an independent scan root") {
  const auto circle = make_level_set("circle", {{"r0", 0.5}});
  const auto flower = make_level_set("flower");
  std::mt19937 g(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int tested = 0;
  while (tested < 50) {
    const Vec2 a{u(g), u(g)};
    const Vec2 b{u(g), u(g)};
    for (const auto* geom : {&circle, &flower}) {
      if (geom->value(a) * geom->value(b) >= 0.0) continue;
      const Vec2 r = edge_intersection(*geom, a, b);
      const Vec2 s = scan_root(*geom, a, b);
      CHECK(norm(r - s) < 1e-10);
      CHECK(std::abs(geom->value(r)) < 1e-10);
      ++tested;
    }
  }
  CHECK_THROWS_AS(edge_intersection(circle, Vec2{0.9, 0.9}, Vec2{0.8, 0.8}),
                  NoBracket);
}

TEST_CASE("classify_point and cut-segment frames") {
  const auto geom = make_level_set("circle", {{"r0", 0.5}});
  CHECK(classify_point(geom, {0.9, 0.0}) == Side::plus);
  CHECK(classify_point(geom, {0.1, 0.0}) == Side::minus);
  CHECK(classify_point(geom, {0.5, 0.0}, 1e-12) == Side::interface);

  const Vec2 D{0.5, 0.0}, E{0.0, 0.5};
  const CutSegment seg = make_cut_segment(D, E, Vec2{1.0, 1.0});
  CHECK(std::abs(norm(seg.n_h) - 1.0) < 1e-14);
  CHECK(std::abs(norm(seg.t_h) - 1.0) < 1e-14);
  CHECK(std::abs(dot(seg.n_h, seg.t_h)) < 1e-14);
  // tangent parallel to E - D, normal orthogonal to it
  CHECK(std::abs(cross(seg.t_h, E - D)) < 1e-14);
  CHECK(std::abs(dot(seg.n_h, E - D)) < 1e-14);
  // the hint side is the positive side of the line functional
  CHECK(seg.line_value({1.0, 1.0}) > 0.0);
  CHECK(seg.side_of({1.0, 1.0}) == Side::plus);
  CHECK(seg.side_of({0.0, 0.0}) == Side::minus);
  CHECK(seg.side_of(D) == Side::interface);

  // orientation flips with the hint
  const CutSegment rev = make_cut_segment(D, E, Vec2{-1.0, -1.0});
  CHECK(norm(rev.n_h + seg.n_h) < 1e-14);
}

TEST_CASE("build_cut_segment points the normal toward the outside") {
  const auto geom = make_level_set("circle", {{"r0", 0.5}});
  const std::array<Vec2, 3> tri = {Vec2{0.25, 0.25}, Vec2{0.75, 0.25},
                                   Vec2{0.25, 0.75}};
  const CutSegment seg = build_cut_segment(geom, tri);
  CHECK(std::abs(geom.value(seg.D)) < 1e-12);
  CHECK(std::abs(geom.value(seg.E)) < 1e-12);
  // normal aligned with the level-set gradient (outward)
  const Vec2 grad = geom.gradient((seg.D + seg.E) * 0.5);
  CHECK(dot(seg.n_h, grad) > 0.0);
}

TEST_CASE("polygon_area and half-plane clipping invariants") {
  const std::vector<Vec2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(std::abs(polygon_area(square) - 1.0) < 1e-15);

  std::mt19937 g(55);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  std::uniform_real_distribution<double> a(0.0, 2.0 * M_PI);
  for (int k = 0; k < 200; ++k) {
    const Vec2 p0{u(g), u(g)};
    const double th = a(g);
    const Vec2 n{std::cos(th), std::sin(th)};
    const auto keep_pos = clip_polygon_halfplane(square, p0, n, +1, 1e-12);
    const auto keep_neg = clip_polygon_halfplane(square, p0, n, -1, 1e-12);
    const double ap = keep_pos.empty() ? 0.0 : polygon_area(keep_pos);
    const double am = keep_neg.empty() ? 0.0 : polygon_area(keep_neg);
    // the two halves tile the square
    CHECK(std::abs(ap + am - 1.0) < 1e-12);
    // every kept vertex satisfies its constraint
    for (const auto& v : keep_pos) CHECK(dot(v - p0, n) >= -1e-9);
    for (const auto& v : keep_neg) CHECK(dot(v - p0, n) <= 1e-9);
  }

  // axis-aligned split with a known answer
  const auto right =
      clip_polygon_halfplane(square, Vec2{0.25, 0.0}, Vec2{1.0, 0.0}, +1, 1e-12);
  CHECK(std::abs(polygon_area(right) - 0.75) < 1e-14);
}

TEST_CASE("split_triangle: tags, areas and closure") {
  std::mt19937 g(99);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const std::array<Vec2, 3> tri = {Vec2{0.0, 0.0}, Vec2{1.0, 0.0},
                                   Vec2{0.3, 1.1}};
  const double area = 0.5 * cross(tri[1] - tri[0], tri[2] - tri[0]);
  for (int k = 0; k < 200; ++k) {
    // cut between edge 0-1 and edge 0-2
    const Vec2 D = tri[0] + (tri[1] - tri[0]) * u(g);
    const Vec2 E = tri[0] + (tri[2] - tri[0]) * u(g);
    const CutSegment seg = make_cut_segment(D, E, tri[1] + tri[2] - 2.0 * tri[0]);
    const auto parts = split_triangle(tri, seg);
    double ap = 0.0, am = 0.0;
    for (const auto& st : parts) {
      CHECK(st.area() > 0.0);  // consistently oriented
      const Vec2 c = (st.v[0] + st.v[1] + st.v[2]) / 3.0;
      CHECK(seg.side_of(c) == st.tag);
      (st.tag == Side::plus ? ap : am) += st.area();
    }
    CHECK(std::abs(ap + am - area) < 1e-13);
    CHECK(ap > 0.0);
    CHECK(am > 0.0);
  }
}

TEST_CASE("cut_quadrature: closure, moments and degeneracy guard") {
  const std::array<Vec2, 3> tri = {Vec2{0.0, 0.0}, Vec2{1.0, 0.0},
                                   Vec2{0.0, 1.0}};
  const double area = 0.5;
  const Vec2 D{0.4, 0.0}, E{0.0, 0.7};
  const CutSegment seg = make_cut_segment(D, E, Vec2{1.0, 1.0});
  const auto cq = cut_quadrature(tri, seg, 4);

  CHECK(std::abs(cq.area_plus + cq.area_minus - area) < 1e-14);
  double wsum = 0.0;
  for (const auto& q : cq.points) wsum += q.w;
  CHECK(std::abs(wsum - area) < 1e-14);

  // split integral of a polynomial equals the uncut integral
  const auto f = [](Vec2 x) { return x.x * x.x + 3.0 * x.y - 0.5 * x.x * x.y; };
  double split = 0.0;
  for (const auto& q : cq.points) split += q.w * f(q.x);
  const double whole = integrate_triangle(tri, 4, f);
  CHECK(std::abs(split - whole) < 1e-13);

  // per-side totals match the tagged sub-triangle integrals
  double side_plus = 0.0;
  for (const auto& q : cq.points)
    if (q.tag == Side::plus) side_plus += q.w * f(q.x);
  double ref_plus = 0.0;
  for (const auto& st : cq.sub_tris)
    if (st.tag == Side::plus) ref_plus += integrate_triangle(st.v, 4, f);
  CHECK(std::abs(side_plus - ref_plus) < 1e-13);

  // every point carries the tag of its side of the line
  for (const auto& q : cq.points) CHECK(seg.side_of(q.x) == q.tag);

  // a cut shaving a negligible corner is rejected
  const Vec2 D2{1e-16, 0.0}, E2{0.0, 1e-16};
  const CutSegment tiny = make_cut_segment(D2, E2, Vec2{1.0, 1.0});
  CHECK_THROWS_AS(cut_quadrature(tri, tiny, 4), DegenerateCut);
}
