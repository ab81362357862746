#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ppife/geometry.hpp"

namespace ppife {

// Structured triangulation of a rectangle: N x N congruent squares, each cut
// along its bottom-left to top-right diagonal. Element 2*(j*N+i) is the lower
// (south-east) triangle of square (i,j), 2*(j*N+i)+1 the upper one.
struct TriMesh {
  Rect domain;
  int N = 0;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise

  struct Edge {
    int a = -1, b = -1;   // vertex ids, a < b
    int t1 = -1, t2 = -1; // adjacent triangles, t1 < t2; t2 = -1 on boundary
  };
  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> tri_edges;  // edge ids per triangle
  std::vector<char> boundary_vertex;
  double h = 0.0;  // maximum triangle diameter

  std::array<Vec2, 3> tri_vertices(int t) const {
    return {vertices[triangles[t][0]], vertices[triangles[t][1]],
            vertices[triangles[t][2]]};
  }
  int vertex_id(int i, int j) const { return j * (N + 1) + i; }

  // O(1) structured point location; throws OutOfDomain.
  int locate(Vec2 x) const;
};

TriMesh build_cartesian_mesh(Rect domain, int N);

// Plain text export: first line "nv nt", then one vertex per line "x y",
// then one triangle per line "v0 v1 v2".
void export_mesh(const TriMesh& mesh, std::ostream& os);

struct ElementClass {
  Side side = Side::plus;           // dominant side for uncut elements
  std::optional<CutSegment> cut;    // present iff the element is cut
  double area_plus = 0.0, area_minus = 0.0;
  bool is_interface() const { return cut.has_value(); }
};

struct InterfaceEdge {
  int edge_id = -1;
  int t1 = -1, t2 = -1;  // adjacent triangles, t1 < t2
  Vec2 n_e;              // unit edge normal pointing from t1 into t2
  Vec2 root;             // the interface crossing on the open edge
};

struct MeshClassification {
  std::vector<ElementClass> elements;
  std::vector<InterfaceEdge> interface_edges;
  std::vector<int> interface_elements;            // sorted element ids
  std::vector<signed char> vertex_sign;           // -1,0,+1 after snapping
  std::vector<std::optional<Vec2>> edge_root;     // per mesh edge
  int demoted_degenerate = 0;
  int dropped_edges = 0;

  bool is_interface(int t) const { return elements[t].is_interface(); }
  Side quad_side(int t, Vec2 x) const {
    const auto& e = elements[t];
    if (!e.cut) return e.side;
    const Side s = e.cut->side_of(x);
    return s == Side::interface ? Side::plus : s;
  }
};

// Classifies every element and assembles the interface-edge set. Throws
// AssumptionAViolated when a straight per-element cut cannot represent the
// interface (0/1/3 crossed edges, double crossing on one edge, or a crossing
// on the domain boundary).
MeshClassification classify_mesh(const TriMesh& mesh, const LevelSet& geom);

}  // namespace ppife
