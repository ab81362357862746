#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ppife/ife_space.hpp"
#include "ppife/lifting.hpp"
#include "ppife/mesh.hpp"

namespace ppife {

using SpMat = Eigen::SparseMatrix<double>;

// Diffusion coefficient, one branch per side; the variable form evaluates the
// branch fields pointwise.
struct Coefficients {
  bool variable = false;
  double beta_plus = 1.0, beta_minus = 1.0;
  std::function<double(Vec2)> beta_plus_fn, beta_minus_fn;

  double operator()(Vec2 x, Side s) const {
    if (s == Side::interface) s = Side::plus;
    if (!variable) return s == Side::plus ? beta_plus : beta_minus;
    return s == Side::plus ? beta_plus_fn(x) : beta_minus_fn(x);
  }

  static Coefficients constant(double bp, double bm) {
    Coefficients c;
    c.beta_plus = bp;
    c.beta_minus = bm;
    return c;
  }
  static Coefficients fields(std::function<double(Vec2)> bp,
                             std::function<double(Vec2)> bm) {
    Coefficients c;
    c.variable = true;
    c.beta_plus_fn = std::move(bp);
    c.beta_minus_fn = std::move(bm);
    return c;
  }
};

// Per-element shape functions, built once and shared read-only: standard hats
// everywhere, cut-element bases plus lifting data on interface elements.
struct BasisCache {
  const TriMesh* mesh = nullptr;
  const MeshClassification* cls = nullptr;
  std::vector<HatBasis> hats;
  std::vector<std::optional<IfeBasis>> ife;   // per element
  std::vector<std::optional<LiftElem>> lift;  // per element

  double eval_in(int t, Vec2 x, Side s, const std::array<double, 3>& nodal)
      const;
  Vec2 grad_in(int t, Side s, const std::array<double, 3>& nodal) const;
};

BasisCache build_bases(const TriMesh& mesh, const MeshClassification& cls,
                       const Coefficients& beta);

// Nodal interpolation into the shape space: the coefficient vector holds the
// vertex values of v; the interpolant is defined element-wise by expansion in
// the cached bases.
Eigen::VectorXd interpolate(const TriMesh& mesh, const MeshClassification& cls,
                            const BasisCache& bases,
                            const std::function<double(Vec2)>& v);

struct AssemblyOptions {
  int quad_order_stiffness = 2;  // exact for constant coefficients
  int quad_order_variable = 4;   // smooth-coefficient volume terms
  int quad_order_load = 4;
};

// Read-only scheme constant: weight of the stabilization bilinear form.
inline constexpr double kStabilizationWeight = 4.0;

struct LinearSystem {
  int n = 0;
  SpMat K;  // volume term
  SpMat C;  // interface-edge consistency terms
  SpMat S;  // lifting stabilization (already carries the scheme weight)
  SpMat A;  // K - C + S
  Eigen::VectorXd load;
  std::vector<char> dirichlet;
  Eigen::VectorXd dirichlet_values;
};

// f must already resolve its own side (true interface side); g is the
// boundary trace.
LinearSystem assemble(const TriMesh& mesh, const MeshClassification& cls,
                      const BasisCache& bases, const Coefficients& beta,
                      const std::function<double(Vec2)>& f,
                      const std::function<double(Vec2)>& g,
                      const AssemblyOptions& opts = {});

struct SolveOptions {
  double tol = 1e-12;
  int max_iter = 20000;
  // reduced systems at or below this dimension use a direct factorization
  int direct_threshold = 100000;
};

struct SolveStats {
  bool direct = false;
  int iterations = 0;
  double residual = 0.0;
};

struct DiscreteSolution {
  Eigen::VectorXd coeffs;
  const TriMesh* mesh = nullptr;
  const MeshClassification* cls = nullptr;
  const BasisCache* bases = nullptr;
  SolveStats stats;

  std::array<double, 3> nodal(int t) const {
    const auto& v = mesh->triangles[t];
    return {coeffs[v[0]], coeffs[v[1]], coeffs[v[2]]};
  }
  double eval_in(int t, Vec2 x, Side s) const {
    return bases->eval_in(t, x, s, nodal(t));
  }
  Vec2 grad_in(int t, Side s) const {
    return bases->grad_in(t, s, nodal(t));
  }
  // locate + side pick by the cut line; throws OutOfDomain
  double eval(Vec2 x) const;
};

DiscreteSolution solve(const LinearSystem& sys, const TriMesh& mesh,
                       const MeshClassification& cls, const BasisCache& bases,
                       const SolveOptions& opts = {});

// Independent plain linear-element stiffness for a uniform coefficient.
SpMat standard_p1_stiffness(const TriMesh& mesh, double beta);

// Coordinate text format, zero-based: "row col value" per stored entry.
void dump_matrix_coordinate(const SpMat& m, std::ostream& os);

}  // namespace ppife
