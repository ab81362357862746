#include "ppife/assembly.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <ostream>

#include "ppife/quadrature.hpp"

namespace ppife {

double BasisCache::eval_in(int t, Vec2 x, Side s,
                           const std::array<double, 3>& nodal) const {
  double v = 0.0;
  if (ife[t]) {
    for (int i = 0; i < 3; ++i) v += nodal[i] * ife[t]->phi[i].eval(x, s);
  } else {
    for (int i = 0; i < 3; ++i) v += nodal[i] * hats[t].lambda[i](x);
  }
  return v;
}

Vec2 BasisCache::grad_in(int t, Side s,
                         const std::array<double, 3>& nodal) const {
  Vec2 g{0.0, 0.0};
  if (ife[t]) {
    for (int i = 0; i < 3; ++i) g += nodal[i] * ife[t]->phi[i].grad(s);
  } else {
    for (int i = 0; i < 3; ++i) g += nodal[i] * hats[t].lambda[i].g;
  }
  return g;
}

BasisCache build_bases(const TriMesh& mesh, const MeshClassification& cls,
                       const Coefficients& beta) {
  BasisCache bc;
  bc.mesh = &mesh;
  bc.cls = &cls;
  const int nt = static_cast<int>(mesh.triangles.size());
  bc.hats.resize(nt);
  bc.ife.resize(nt);
  bc.lift.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const auto tri = mesh.tri_vertices(t);
    bc.hats[t] = p1_hats(tri);
    const auto& ec = cls.elements[t];
    if (!ec.cut) continue;
    const CutSegment& seg = *ec.cut;
    const Vec2 mid = (seg.D + seg.E) * 0.5;
    const double bp = beta(mid, Side::plus);
    const double bm = beta(mid, Side::minus);
    bc.ife[t] = build_ife_basis(tri, seg, bp, bm);

    LiftElem le;
    le.n_h = seg.n_h;
    le.t_h = seg.t_h;
    le.area_plus = ec.area_plus;
    le.area_minus = ec.area_minus;
    le.beta_plus = bp;
    le.beta_minus = bm;
    if (!beta.variable) {
      le.int_beta_plus = bp * ec.area_plus;
      le.int_beta_minus = bm * ec.area_minus;
    } else {
      le.int_beta_plus = 0.0;
      le.int_beta_minus = 0.0;
      const auto cq = cut_quadrature(tri, seg, 6);
      for (const auto& q : cq.points) {
        if (q.tag == Side::plus)
          le.int_beta_plus += q.w * beta(q.x, Side::plus);
        else
          le.int_beta_minus += q.w * beta(q.x, Side::minus);
      }
    }
    bc.lift[t] = le;
  }
  return bc;
}

Eigen::VectorXd interpolate(const TriMesh& mesh, const MeshClassification&,
                            const BasisCache&,
                            const std::function<double(Vec2)>& v) {
  Eigen::VectorXd coeffs(static_cast<int>(mesh.vertices.size()));
  for (size_t i = 0; i < mesh.vertices.size(); ++i)
    coeffs[static_cast<int>(i)] = v(mesh.vertices[i]);
  return coeffs;
}

namespace {

using Triplet = Eigen::Triplet<double>;

void volume_terms(const TriMesh& mesh, const MeshClassification& cls,
                  const BasisCache& bases, const Coefficients& beta,
                  const AssemblyOptions& opts, std::vector<Triplet>& kt) {
  const int nt = static_cast<int>(mesh.triangles.size());
  for (int t = 0; t < nt; ++t) {
    const auto tri = mesh.tri_vertices(t);
    const auto& vid = mesh.triangles[t];
    const auto& ec = cls.elements[t];
    double local[3][3] = {};
    if (!ec.cut) {
      const double area = bases.hats[t].area;
      double ib;  // integral of the coefficient over the element
      if (!beta.variable) {
        ib = beta(tri[0], ec.side) * area;
      } else {
        ib = integrate_triangle(tri, opts.quad_order_variable, [&](Vec2 x) {
          return beta(x, ec.side);
        });
      }
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          local[i][j] =
              ib * dot(bases.hats[t].lambda[i].g, bases.hats[t].lambda[j].g);
    } else {
      const IfeBasis& b = *bases.ife[t];
      for (const auto& st : split_triangle(tri, *ec.cut)) {
        double ib;
        if (!beta.variable) {
          ib = beta(st.v[0], st.tag) * st.area();
        } else {
          ib = integrate_triangle(st.v, opts.quad_order_variable, [&](Vec2 x) {
            return beta(x, st.tag);
          });
        }
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            local[i][j] +=
                ib * dot(b.phi[i].grad(st.tag), b.phi[j].grad(st.tag));
      }
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        kt.emplace_back(vid[i], vid[j], local[i][j]);
  }
}

// Local frame of one interface edge: the four coupled vertices and, per
// element, the local index of each (or -1).
struct EdgeDofs {
  std::array<int, 4> global{};
  int count = 0;
  std::array<int, 4> in_t1{};
  std::array<int, 4> in_t2{};
};

EdgeDofs collect_edge_dofs(const TriMesh& mesh, int t1, int t2) {
  EdgeDofs d;
  d.in_t1.fill(-1);
  d.in_t2.fill(-1);
  auto add = [&](int g) {
    for (int k = 0; k < d.count; ++k)
      if (d.global[k] == g) return k;
    d.global[d.count] = g;
    return d.count++;
  };
  for (int k = 0; k < 3; ++k) d.in_t1[add(mesh.triangles[t1][k])] = k;
  for (int k = 0; k < 3; ++k) d.in_t2[add(mesh.triangles[t2][k])] = k;
  return d;
}

void interface_edge_terms(const TriMesh& mesh, const MeshClassification& cls,
                          const BasisCache& bases, const Coefficients& beta,
                          std::vector<Triplet>& ct, std::vector<Triplet>& st) {
  for (const auto& ie : cls.interface_edges) {
    const auto& ed = mesh.edges[ie.edge_id];
    const Vec2 a = mesh.vertices[ed.a];
    const Vec2 b = mesh.vertices[ed.b];
    const EdgeDofs dofs = collect_edge_dofs(mesh, ie.t1, ie.t2);
    const IfeBasis& b1 = *bases.ife[ie.t1];
    const IfeBasis& b2 = *bases.ife[ie.t2];

    // trace helpers: local dof l seen from each element
    const auto value1 = [&](int l, Vec2 x, Side s) {
      const int k = dofs.in_t1[l];
      return k < 0 ? 0.0 : b1.phi[k].eval(x, s);
    };
    const auto value2 = [&](int l, Vec2 x, Side s) {
      const int k = dofs.in_t2[l];
      return k < 0 ? 0.0 : b2.phi[k].eval(x, s);
    };
    const auto flux1 = [&](int l, Vec2 x, Side s) {
      const int k = dofs.in_t1[l];
      return k < 0 ? 0.0
                   : beta(x, s) * dot(b1.phi[k].grad(s), ie.n_e);
    };
    const auto flux2 = [&](int l, Vec2 x, Side s) {
      const int k = dofs.in_t2[l];
      return k < 0 ? 0.0
                   : beta(x, s) * dot(b2.phi[k].grad(s), ie.n_e);
    };

    // consistency terms, integrated piece by piece
    double cl[4][4] = {};
    const auto piece = [&](Vec2 p0, Vec2 p1) {
      const double len = norm(p1 - p0);
      if (len <= 0.0) return;
      const Vec2 mid = (p0 + p1) * 0.5;
      Side s1 = b1.seg.side_of(mid);
      Side s2 = b2.seg.side_of(mid);
      if (s1 == Side::interface) s1 = Side::plus;
      if (s2 == Side::interface) s2 = Side::plus;
      for (const auto& q : segment_rule(5)) {
        const Vec2 x = p0 + (p1 - p0) * q.t;
        const double w = q.w * len;
        double jump[4], avg[4];
        for (int l = 0; l < dofs.count; ++l) {
          jump[l] = value1(l, x, s1) - value2(l, x, s2);
          avg[l] = 0.5 * (flux1(l, x, s1) + flux2(l, x, s2));
        }
        for (int l = 0; l < dofs.count; ++l)
          for (int m = 0; m < dofs.count; ++m)
            cl[l][m] += w * (avg[l] * jump[m] + avg[m] * jump[l]);
      }
    };
    piece(a, ie.root);
    piece(ie.root, b);

    // stabilization from the lifted jumps
    LiftEdge le;
    le.a = a;
    le.b = b;
    le.p = ie.root;
    le.side_ap = cls.vertex_sign[ed.a] > 0 ? Side::plus : Side::minus;
    le.n_e = ie.n_e;
    const LiftElem& e1 = *bases.lift[ie.t1];
    const LiftElem& e2 = *bases.lift[ie.t2];

    std::array<LiftingField, 4> lifts;
    for (int l = 0; l < dofs.count; ++l) {
      const auto jump_fn = [&, l](Vec2 x) {
        Side s1 = b1.seg.side_of(x);
        Side s2 = b2.seg.side_of(x);
        if (s1 == Side::interface) s1 = Side::plus;
        if (s2 == Side::interface) s2 = Side::plus;
        return value1(l, x, s1) - value2(l, x, s2);
      };
      if (!beta.variable) {
        lifts[l] = lift_jump(le, e1, e2, jump_fn);
      } else {
        lifts[l] = lift_jump_variable(le, e1, e2, jump_fn,
                                      [&](Vec2 x, Side s) {
                                        return beta(x, s);
                                      });
      }
    }
    double sl[4][4] = {};
    for (int l = 0; l < dofs.count; ++l)
      for (int m = 0; m < dofs.count; ++m)
        sl[l][m] = kStabilizationWeight *
                   lifting_inner(lifts[l], lifts[m], e1, e2);

    for (int l = 0; l < dofs.count; ++l)
      for (int m = 0; m < dofs.count; ++m) {
        if (cl[l][m] != 0.0)
          ct.emplace_back(dofs.global[l], dofs.global[m], cl[l][m]);
        if (sl[l][m] != 0.0)
          st.emplace_back(dofs.global[l], dofs.global[m], sl[l][m]);
      }
  }
}

}  // namespace

LinearSystem assemble(const TriMesh& mesh, const MeshClassification& cls,
                      const BasisCache& bases, const Coefficients& beta,
                      const std::function<double(Vec2)>& f,
                      const std::function<double(Vec2)>& g,
                      const AssemblyOptions& opts) {
  LinearSystem sys;
  const int n = static_cast<int>(mesh.vertices.size());
  sys.n = n;

  std::vector<Triplet> kt, ct, st;
  volume_terms(mesh, cls, bases, beta, opts, kt);
  interface_edge_terms(mesh, cls, bases, beta, ct, st);

  sys.K.resize(n, n);
  sys.C.resize(n, n);
  sys.S.resize(n, n);
  sys.K.setFromTriplets(kt.begin(), kt.end());
  sys.C.setFromTriplets(ct.begin(), ct.end());
  sys.S.setFromTriplets(st.begin(), st.end());
  sys.A = sys.K - sys.C + sys.S;

  sys.load = Eigen::VectorXd::Zero(n);
  const int nt = static_cast<int>(mesh.triangles.size());
  for (int t = 0; t < nt; ++t) {
    const auto tri = mesh.tri_vertices(t);
    const auto& vid = mesh.triangles[t];
    const auto& ec = cls.elements[t];
    if (!ec.cut) {
      const double area = bases.hats[t].area;
      for (const auto& q : triangle_rule(opts.quad_order_load)) {
        const Vec2 x = bary_point(tri, q);
        const double w = q.w * area * f(x);
        for (int i = 0; i < 3; ++i)
          sys.load[vid[i]] += w * bases.hats[t].lambda[i](x);
      }
    } else {
      const auto cq = cut_quadrature(tri, *ec.cut, opts.quad_order_load);
      const IfeBasis& b = *bases.ife[t];
      for (const auto& q : cq.points) {
        const double w = q.w * f(q.x);
        for (int i = 0; i < 3; ++i)
          sys.load[vid[i]] += w * b.phi[i].eval(q.x, q.tag);
      }
    }
  }

  sys.dirichlet.assign(n, 0);
  sys.dirichlet_values = Eigen::VectorXd::Zero(n);
  for (int v = 0; v < n; ++v) {
    if (!mesh.boundary_vertex[v]) continue;
    sys.dirichlet[v] = 1;
    sys.dirichlet_values[v] = g(mesh.vertices[v]);
  }
  return sys;
}

double DiscreteSolution::eval(Vec2 x) const {
  const int t = mesh->locate(x);
  return eval_in(t, x, cls->quad_side(t, x));
}

DiscreteSolution solve(const LinearSystem& sys, const TriMesh& mesh,
                       const MeshClassification& cls, const BasisCache& bases,
                       const SolveOptions& opts) {
  const int n = sys.n;
  std::vector<int> free_id(n, -1);
  int nfree = 0;
  for (int i = 0; i < n; ++i)
    if (!sys.dirichlet[i]) free_id[i] = nfree++;

  // reduced system with the boundary data moved to the right-hand side
  std::vector<Triplet> at;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nfree);
  for (int i = 0; i < n; ++i)
    if (free_id[i] >= 0) rhs[free_id[i]] = sys.load[i];
  for (int col = 0; col < sys.A.outerSize(); ++col) {
    for (SpMat::InnerIterator it(sys.A, col); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int c = static_cast<int>(it.col());
      if (free_id[r] >= 0 && free_id[c] >= 0) {
        at.emplace_back(free_id[r], free_id[c], it.value());
      } else if (free_id[r] >= 0 && free_id[c] < 0) {
        rhs[free_id[r]] -= it.value() * sys.dirichlet_values[c];
      }
    }
  }
  SpMat A(nfree, nfree);
  A.setFromTriplets(at.begin(), at.end());

  Eigen::VectorXd u;
  SolveStats stats;
  if (nfree <= opts.direct_threshold) {
    Eigen::SimplicialLDLT<SpMat> ldlt(A);
    if (ldlt.info() != Eigen::Success) throw NotConverged(0, -1.0);
    u = ldlt.solve(rhs);
    stats.direct = true;
  } else {
    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg(A);
    cg.setTolerance(opts.tol);
    cg.setMaxIterations(opts.max_iter);
    u = cg.solve(rhs);
    stats.iterations = static_cast<int>(cg.iterations());
    if (cg.info() != Eigen::Success)
      throw NotConverged(stats.iterations, cg.error());
  }

  // independent residual check on the reduced system
  const double rhs_norm = rhs.norm();
  const double res = (A * u - rhs).norm() / (rhs_norm > 0.0 ? rhs_norm : 1.0);
  stats.residual = res;
  if (!stats.direct && res > 2.0 * opts.tol)
    throw NotConverged(stats.iterations, res);
  if (stats.direct && !(res < 1e-7)) throw NotConverged(0, res);

  DiscreteSolution sol;
  sol.coeffs = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    sol.coeffs[i] =
        free_id[i] >= 0 ? u[free_id[i]] : sys.dirichlet_values[i];
  sol.mesh = &mesh;
  sol.cls = &cls;
  sol.bases = &bases;
  sol.stats = stats;
  return sol;
}

SpMat standard_p1_stiffness(const TriMesh& mesh, double beta) {
  std::vector<Triplet> kt;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto tri = mesh.tri_vertices(static_cast<int>(t));
    const auto& vid = mesh.triangles[t];
    const HatBasis h = p1_hats(tri);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        kt.emplace_back(vid[i], vid[j],
                        beta * h.area * dot(h.lambda[i].g, h.lambda[j].g));
  }
  SpMat k(mesh.vertices.size(), mesh.vertices.size());
  k.setFromTriplets(kt.begin(), kt.end());
  return k;
}

void dump_matrix_coordinate(const SpMat& m, std::ostream& os) {
  os.precision(17);
  for (int col = 0; col < m.outerSize(); ++col)
    for (SpMat::InnerIterator it(m, col); it; ++it)
      os << it.row() << " " << it.col() << " " << it.value() << "\n";
}

}  // namespace ppife
