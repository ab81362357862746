#include "ppife/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

namespace ppife {

int TriMesh::locate(Vec2 x) const {
  if (!domain.contains(x, 1e-12 * h)) throw OutOfDomain();
  const double dx = domain.width() / N;
  const double dy = domain.height() / N;
  int i = static_cast<int>(std::floor((x.x - domain.lo.x) / dx));
  int j = static_cast<int>(std::floor((x.y - domain.lo.y) / dy));
  i = std::clamp(i, 0, N - 1);
  j = std::clamp(j, 0, N - 1);
  const Vec2 a{domain.lo.x + i * dx, domain.lo.y + j * dy};
  // below the bottom-left/top-right diagonal -> lower triangle
  const Vec2 r = x - a;
  const int upper = (r.y * dx > r.x * dy) ? 1 : 0;
  return 2 * (j * N + i) + upper;
}

TriMesh build_cartesian_mesh(Rect domain, int N) {
  if (N < 2) throw Error("mesh: N must be at least 2");
  TriMesh m;
  m.domain = domain;
  m.N = N;
  const double dx = domain.width() / N;
  const double dy = domain.height() / N;

  m.vertices.reserve((N + 1) * (N + 1));
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i <= N; ++i)
      m.vertices.push_back({domain.lo.x + i * dx, domain.lo.y + j * dy});

  m.triangles.reserve(2 * N * N);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) {
      const int a = m.vertex_id(i, j);
      const int b = m.vertex_id(i + 1, j);
      const int c = m.vertex_id(i + 1, j + 1);
      const int d = m.vertex_id(i, j + 1);
      m.triangles.push_back({a, b, c});  // lower
      m.triangles.push_back({a, c, d});  // upper
    }
  }

  std::map<std::pair<int, int>, int> edge_ids;
  m.tri_edges.assign(m.triangles.size(), {-1, -1, -1});
  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
    for (int k = 0; k < 3; ++k) {
      int a = m.triangles[t][k];
      int b = m.triangles[t][(k + 1) % 3];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = edge_ids.try_emplace({a, b}, -1);
      if (inserted) {
        it->second = static_cast<int>(m.edges.size());
        m.edges.push_back({a, b, t, -1});
      } else {
        auto& e = m.edges[it->second];
        e.t2 = t;
        if (e.t1 > e.t2) std::swap(e.t1, e.t2);
      }
      m.tri_edges[t][k] = it->second;
    }
  }

  m.boundary_vertex.assign(m.vertices.size(), 0);
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i <= N; ++i)
      if (i == 0 || i == N || j == 0 || j == N)
        m.boundary_vertex[m.vertex_id(i, j)] = 1;

  m.h = std::sqrt(dx * dx + dy * dy);
  return m;
}

void export_mesh(const TriMesh& mesh, std::ostream& os) {
  os << mesh.vertices.size() << " " << mesh.triangles.size() << "\n";
  os.precision(17);
  for (const auto& v : mesh.vertices) os << v.x << " " << v.y << "\n";
  for (const auto& t : mesh.triangles)
    os << t[0] << " " << t[1] << " " << t[2] << "\n";
}

namespace {

// Probes the open edge for sign changes the endpoint signs cannot see
// (an interface entering and leaving through the same edge).
bool edge_double_crossing(const LevelSet& geom, Vec2 a, Vec2 b, int sa,
                          int sb) {
  int prev = sa;
  int changes = 0;
  for (int k = 1; k <= 7; ++k) {
    const double t = k / 8.0;
    const double v = geom.value(a + (b - a) * t);
    const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (s != 0 && prev != 0 && s != prev) ++changes;
    if (s != 0) prev = s;
  }
  if (sb != 0 && prev != 0 && sb != prev) ++changes;
  return changes > 1;
}

}  // namespace

MeshClassification classify_mesh(const TriMesh& mesh, const LevelSet& geom) {
  MeshClassification cls;
  const int nv = static_cast<int>(mesh.vertices.size());
  const int nt = static_cast<int>(mesh.triangles.size());
  const int ne = static_cast<int>(mesh.edges.size());

  // vertex values and snapped signs
  std::vector<double> phi(nv);
  cls.vertex_sign.assign(nv, 0);
  for (int v = 0; v < nv; ++v) {
    phi[v] = geom.value(mesh.vertices[v]);
    const double gn = norm(geom.gradient(mesh.vertices[v]));
    const double ztol = 1e-12 * mesh.h * std::max(1.0, gn);
    cls.vertex_sign[v] =
        std::abs(phi[v]) <= ztol ? 0 : (phi[v] > 0.0 ? 1 : -1);
  }

  // per-edge roots; a root landing within the snap distance of an endpoint
  // zeroes that vertex and forces a recomputation pass
  cls.edge_root.assign(ne, std::nullopt);
  const double snap = 1e-12 * mesh.h;
  for (int pass = 0; pass < 4; ++pass) {
    bool snapped = false;
    for (int e = 0; e < ne; ++e) {
      const auto& ed = mesh.edges[e];
      const int sa = cls.vertex_sign[ed.a];
      const int sb = cls.vertex_sign[ed.b];
      if (sa * sb >= 0) {
        cls.edge_root[e].reset();
        continue;
      }
      if (cls.edge_root[e]) continue;
      const Vec2 a = mesh.vertices[ed.a];
      const Vec2 b = mesh.vertices[ed.b];
      const Vec2 r = edge_intersection(geom, a, b);
      if (norm(r - a) < snap) {
        cls.vertex_sign[ed.a] = 0;
        snapped = true;
      } else if (norm(r - b) < snap) {
        cls.vertex_sign[ed.b] = 0;
        snapped = true;
      } else {
        cls.edge_root[e] = r;
      }
    }
    if (!snapped) break;
  }

  // hidden double crossings invalidate the straight-cut model
  for (int e = 0; e < ne; ++e) {
    const auto& ed = mesh.edges[e];
    if (edge_double_crossing(geom, mesh.vertices[ed.a], mesh.vertices[ed.b],
                             cls.vertex_sign[ed.a], cls.vertex_sign[ed.b]))
      throw AssumptionAViolated(ed.t1, 2 * mesh.N,
                                "edge crossed more than once");
  }

  cls.elements.assign(nt, {});
  for (int t = 0; t < nt; ++t) {
    const auto tri = mesh.tri_vertices(t);
    const auto& vid = mesh.triangles[t];
    const int s0 = cls.vertex_sign[vid[0]];
    const int s1 = cls.vertex_sign[vid[1]];
    const int s2 = cls.vertex_sign[vid[2]];
    const bool has_plus = s0 > 0 || s1 > 0 || s2 > 0;
    const bool has_minus = s0 < 0 || s1 < 0 || s2 < 0;

    auto& ec = cls.elements[t];
    if (!has_plus && !has_minus)
      throw AssumptionAViolated(t, 2 * mesh.N,
                                "all vertices on the interface");
    if (!has_plus || !has_minus) {
      ec.side = has_plus ? Side::plus : Side::minus;
      const double area = 0.5 * cross(tri[1] - tri[0], tri[2] - tri[0]);
      (ec.side == Side::plus ? ec.area_plus : ec.area_minus) = area;
      continue;
    }

    // cut element: collect the two cut points (edge roots and zero vertices)
    std::vector<Vec2> pts;
    for (int k = 0; k < 3; ++k) {
      const auto& r = cls.edge_root[mesh.tri_edges[t][k]];
      if (r) pts.push_back(*r);
    }
    for (int k = 0; k < 3; ++k)
      if (cls.vertex_sign[vid[k]] == 0) pts.push_back(tri[k]);
    if (pts.size() != 2)
      throw AssumptionAViolated(
          t, 2 * mesh.N,
          std::to_string(pts.size()) + " cut points (expected 2)");

    const Vec2 mid = (pts[0] + pts[1]) * 0.5;
    CutSegment seg = make_cut_segment(pts[0], pts[1], geom.gradient(mid));

    // sub-areas decide degeneracy
    double ap = 0.0, am = 0.0;
    for (const auto& st : split_triangle(tri, seg))
      (st.tag == Side::plus ? ap : am) += st.area();
    const double area = 0.5 * cross(tri[1] - tri[0], tri[2] - tri[0]);
    if (std::min(ap, am) < 1e-14 * area) {
      ec.side = ap >= am ? Side::plus : Side::minus;
      (ec.side == Side::plus ? ec.area_plus : ec.area_minus) = area;
      ++cls.demoted_degenerate;
      continue;
    }
    ec.cut = seg;
    ec.side = ap >= am ? Side::plus : Side::minus;
    ec.area_plus = ap;
    ec.area_minus = am;
    cls.interface_elements.push_back(t);
  }

  // interface edges: strict endpoint sign change and two interface neighbors
  for (int e = 0; e < ne; ++e) {
    const auto& ed = mesh.edges[e];
    if (cls.vertex_sign[ed.a] * cls.vertex_sign[ed.b] >= 0) continue;
    if (ed.t2 < 0)
      throw AssumptionAViolated(ed.t1, 2 * mesh.N,
                                "interface crosses the domain boundary");
    if (!cls.is_interface(ed.t1) || !cls.is_interface(ed.t2)) {
      ++cls.dropped_edges;
      continue;
    }
    InterfaceEdge ie;
    ie.edge_id = e;
    ie.t1 = ed.t1;
    ie.t2 = ed.t2;
    ie.root = *cls.edge_root[e];
    const Vec2 a = mesh.vertices[ed.a];
    const Vec2 b = mesh.vertices[ed.b];
    Vec2 n = normalized(rot90_ccw(b - a));
    const auto centroid = [&](int t) {
      const auto tv = mesh.tri_vertices(t);
      return (tv[0] + tv[1] + tv[2]) / 3.0;
    };
    if (dot(n, centroid(ie.t2) - centroid(ie.t1)) < 0.0) n = -n;
    ie.n_e = n;
    cls.interface_edges.push_back(ie);
  }

  return cls;
}

}  // namespace ppife
