#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ppife/mesh.hpp"

using namespace ppife;

namespace {

const Rect kDom{Vec2{-1.0, -1.0}, Vec2{1.0, 1.0}};

double point_segment_dist(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double t = std::clamp(dot(p - a, d) / dot(d, d), 0.0, 1.0);
  return norm(p - (a + d * t));
}

bool point_in_tri(const std::array<Vec2, 3>& tri, Vec2 p, double tol) {
  const double a = cross(tri[1] - tri[0], p - tri[0]);
  const double b = cross(tri[2] - tri[1], p - tri[1]);
  const double c = cross(tri[0] - tri[2], p - tri[2]);
  return a >= -tol && b >= -tol && c >= -tol;
}

// distance range from a point to a closed triangle
std::pair<double, double> tri_dist_range(const std::array<Vec2, 3>& tri,
                                         Vec2 c) {
  double mx = 0.0;
  for (const auto& v : tri) mx = std::max(mx, norm(v - c));
  double mn;
  if (point_in_tri(tri, c, 0.0)) {
    mn = 0.0;
  } else {
    mn = point_segment_dist(c, tri[0], tri[1]);
    mn = std::min(mn, point_segment_dist(c, tri[1], tri[2]));
    mn = std::min(mn, point_segment_dist(c, tri[2], tri[0]));
  }
  return {mn, mx};
}

}  // namespace

TEST_CASE("cartesian mesh: entity counts and structure") {
  const int N = 4;
  const TriMesh m = build_cartesian_mesh(kDom, N);
  CHECK(static_cast<int>(m.vertices.size()) == (N + 1) * (N + 1));
  CHECK(static_cast<int>(m.triangles.size()) == 2 * N * N);
  CHECK(static_cast<int>(m.edges.size()) == 3 * N * N + 2 * N);
  CHECK(m.h == doctest::Approx(std::sqrt(2.0) * 2.0 / N).epsilon(1e-14));

  int boundary_edges = 0;
  for (const auto& e : m.edges) {
    CHECK(e.a < e.b);
    CHECK(e.t1 >= 0);
    if (e.t2 < 0)
      ++boundary_edges;
    else
      CHECK(e.t1 < e.t2);
  }
  CHECK(boundary_edges == 4 * N);

  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
    const auto tri = m.tri_vertices(t);
    CHECK(cross(tri[1] - tri[0], tri[2] - tri[0]) > 0.0);  // counterclockwise
    // each listed edge joins two vertices of the triangle
    for (int k = 0; k < 3; ++k) {
      const auto& e = m.edges[m.tri_edges[t][k]];
      int hits = 0;
      for (int v : m.triangles[t]) hits += (v == e.a) + (v == e.b);
      CHECK(hits == 2);
      CHECK((e.t1 == t || e.t2 == t));
    }
  }

  // vertex grid layout and boundary flags
  CHECK(norm(m.vertices[m.vertex_id(0, 0)] - kDom.lo) < 1e-15);
  CHECK(norm(m.vertices[m.vertex_id(N, N)] - kDom.hi) < 1e-15);
  CHECK(m.boundary_vertex[m.vertex_id(0, 2)] == 1);
  CHECK(m.boundary_vertex[m.vertex_id(2, 2)] == 0);
}

TEST_CASE("locate: random points land in a containing triangle") {
  const TriMesh m = build_cartesian_mesh(kDom, 7);
  std::mt19937 g(321);
  std::uniform_real_distribution<double> u(-0.999, 0.999);
  for (int k = 0; k < 500; ++k) {
    const Vec2 p{u(g), u(g)};
    const int t = m.locate(p);
    CHECK(point_in_tri(m.tri_vertices(t), p, 1e-12));
  }
  CHECK_THROWS_AS(m.locate(Vec2{1.5, 0.0}), OutOfDomain);
  CHECK_THROWS_AS(m.locate(Vec2{0.0, -1.0000001}), OutOfDomain);
}

TEST_CASE("export_mesh: header and coordinates round-trip") {
  const TriMesh m = build_cartesian_mesh(kDom, 2);
  std::ostringstream os;
  export_mesh(m, os);
  std::istringstream is(os.str());
  int nv = 0, nt = 0;
  is >> nv >> nt;
  CHECK(nv == 9);
  CHECK(nt == 8);
  for (int v = 0; v < nv; ++v) {
    double x, y;
    is >> x >> y;
    CHECK(x == m.vertices[v].x);
    CHECK(y == m.vertices[v].y);
  }
  for (int t = 0; t < nt; ++t) {
    int a, b, c;
    is >> a >> b >> c;
    CHECK(a == m.triangles[t][0]);
    CHECK(b == m.triangles[t][1]);
    CHECK(c == m.triangles[t][2]);
  }
}

TEST_CASE("classification matches an exact circle-crossing oracle") {
  const auto geom = make_level_set("circle", {{"r0", 0.5}});
  const Vec2 c{0.0, 0.0};
  const double r = 0.5, eps = 1e-9;
  for (int N : {8, 16, 32}) {
    const TriMesh m = build_cartesian_mesh(kDom, N);
    const MeshClassification cls = classify_mesh(m, geom);
    CHECK(cls.demoted_degenerate == 0);
    CHECK(cls.dropped_edges == 0);

    std::set<int> oracle;
    for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
      const auto [mn, mx] = tri_dist_range(m.tri_vertices(t), c);
      if (mn < r - eps && mx > r + eps) oracle.insert(t);
    }
    const std::set<int> got(cls.interface_elements.begin(),
                            cls.interface_elements.end());
    CHECK(got == oracle);
  }
}

TEST_CASE("classification: snapped vertices and cut data on N=8") {
  const auto geom = make_level_set("circle", {{"r0", 0.5}});
  const TriMesh m = build_cartesian_mesh(kDom, 8);
  const MeshClassification cls = classify_mesh(m, geom);

  // the circle passes exactly through four grid vertices
  int zeros = 0;
  for (signed char s : cls.vertex_sign) zeros += (s == 0);
  CHECK(zeros == 4);
  CHECK(cls.vertex_sign[m.vertex_id(6, 4)] == 0);  // (0.5, 0)

  for (int t : cls.interface_elements) {
    const auto& ec = cls.elements[t];
    REQUIRE(ec.cut.has_value());
    // cut points on the zero set, frame outward
    CHECK(std::abs(geom.value(ec.cut->D)) < 1e-10);
    CHECK(std::abs(geom.value(ec.cut->E)) < 1e-10);
    CHECK(dot(ec.cut->n_h, geom.gradient((ec.cut->D + ec.cut->E) * 0.5)) > 0.0);
    // sub-areas positive and close the element area
    const auto tri = m.tri_vertices(t);
    const double area = 0.5 * cross(tri[1] - tri[0], tri[2] - tri[0]);
    CHECK(ec.area_plus > 0.0);
    CHECK(ec.area_minus > 0.0);
    CHECK(std::abs(ec.area_plus + ec.area_minus - area) < 1e-14);
  }

  const auto centroid = [&](int t) {
    const auto tri = m.tri_vertices(t);
    return (tri[0] + tri[1] + tri[2]) / 3.0;
  };
  for (const auto& ie : cls.interface_edges) {
    CHECK(cls.is_interface(ie.t1));
    CHECK(cls.is_interface(ie.t2));
    CHECK(ie.t1 < ie.t2);
    CHECK(std::abs(norm(ie.n_e) - 1.0) < 1e-14);
    CHECK(dot(ie.n_e, centroid(ie.t2) - centroid(ie.t1)) > 0.0);
    // the root lies on the shared edge and on the curve
    const auto& ed = m.edges[ie.edge_id];
    CHECK(point_segment_dist(ie.root, m.vertices[ed.a], m.vertices[ed.b]) <
          1e-12);
    CHECK(std::abs(geom.value(ie.root)) < 1e-10);
  }
}

TEST_CASE("interface-element pattern respects the domain symmetries") {
  const int N = 8;
  const auto geom = make_level_set("circle", {{"r0", 0.5}});
  const TriMesh m = build_cartesian_mesh(kDom, N);
  const MeshClassification cls = classify_mesh(m, geom);

  using Op = Vec2 (*)(Vec2);
  // the diagonal split is preserved by these four symmetries of the square
  const Op tri_ops[] = {
      [](Vec2 p) { return p; },
      [](Vec2 p) { return Vec2{-p.x, -p.y}; },
      [](Vec2 p) { return Vec2{p.y, p.x}; },
      [](Vec2 p) { return Vec2{-p.y, -p.x}; },
  };
  const auto centroid = [&](int t) {
    const auto tri = m.tri_vertices(t);
    return (tri[0] + tri[1] + tri[2]) / 3.0;
  };
  for (const auto& op : tri_ops) {
    for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
      const int t2 = m.locate(op(centroid(t)));
      CHECK(cls.is_interface(t) == cls.is_interface(t2));
    }
  }

  // at the square level all eight symmetries apply
  const Op sq_ops[] = {
      [](Vec2 p) { return p; },
      [](Vec2 p) { return Vec2{-p.x, p.y}; },
      [](Vec2 p) { return Vec2{p.x, -p.y}; },
      [](Vec2 p) { return Vec2{-p.x, -p.y}; },
      [](Vec2 p) { return Vec2{p.y, p.x}; },
      [](Vec2 p) { return Vec2{-p.y, p.x}; },
      [](Vec2 p) { return Vec2{p.y, -p.x}; },
      [](Vec2 p) { return Vec2{-p.y, -p.x}; },
  };
  const auto square_cut = [&](int i, int j) {
    const int t0 = 2 * (j * N + i);
    return cls.is_interface(t0) || cls.is_interface(t0 + 1);
  };
  const double cell = 2.0 / N;
  for (const auto& op : sq_ops) {
    for (int j = 0; j < N; ++j) {
      for (int i = 0; i < N; ++i) {
        const Vec2 center{-1.0 + (i + 0.5) * cell, -1.0 + (j + 0.5) * cell};
        const Vec2 q = op(center);
        const int qi = static_cast<int>(std::floor((q.x + 1.0) / cell));
        const int qj = static_cast<int>(std::floor((q.y + 1.0) / cell));
        CHECK(square_cut(i, j) == square_cut(qi, qj));
      }
    }
  }
}

TEST_CASE("unresolvable geometries are rejected with a refinement hint") {
  const TriMesh m = build_cartesian_mesh(kDom, 4);

  // a parabola dipping through one edge twice between its endpoints
  LevelSet wiggle;
  wiggle.value = [](Vec2 p) { return p.y - 0.49 - (p.x - 0.23) * (p.x - 0.23); };
  wiggle.gradient = [](Vec2 p) { return Vec2{-2.0 * (p.x - 0.23), 1.0}; };
  CHECK_THROWS_AS(classify_mesh(m, wiggle), AssumptionAViolated);
  try {
    classify_mesh(m, wiggle);
  } catch (const AssumptionAViolated& e) {
    CHECK(e.suggested_n == 8);
    CHECK(e.element >= 0);
  }

  // an open curve leaving through the domain boundary
  const auto line =
      make_level_set("line", {{"a", 1.0}, {"b", -1.0}, {"c", 0.1}});
  CHECK_THROWS_AS(classify_mesh(m, line), AssumptionAViolated);
}

TEST_CASE("near-vertex slivers are demoted instead of kept as cuts") {
  // a circle passing 1e-8 outside four grid vertices: too far to snap the
  // vertices onto the curve, close enough that the corner slivers it carves
  // fall below the degeneracy threshold
  const auto geom = make_level_set("circle", {{"r0", 0.5 + 1e-8}});
  const TriMesh m = build_cartesian_mesh(kDom, 4);
  const MeshClassification cls = classify_mesh(m, geom);
  CHECK(cls.demoted_degenerate > 0);
  // adjacent sign-change edges with a demoted neighbor leave the edge set
  CHECK(cls.dropped_edges > 0);
  for (const auto& ie : cls.interface_edges) {
    CHECK(cls.is_interface(ie.t1));
    CHECK(cls.is_interface(ie.t2));
  }
}
