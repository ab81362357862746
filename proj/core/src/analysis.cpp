#include "ppife/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "ppife/quadrature.hpp"

namespace ppife {

double ErrorReport::triple_norm() const {
  return std::sqrt(h1_error * h1_error + edge_avg_sq + edge_jump_sq + sh_sq);
}

namespace {

// accumulates the interface-edge average and jump terms for a field whose
// per-element traces are supplied by callables
template <typename Value, typename Grad>
void edge_terms(const TriMesh& mesh, const MeshClassification& cls,
                const Coefficients& beta, double h, Value&& value,
                Grad&& grad, double& avg_sq, double& jump_sq) {
  for (const auto& ie : cls.interface_edges) {
    const auto& ed = mesh.edges[ie.edge_id];
    const Vec2 a = mesh.vertices[ed.a];
    const Vec2 b = mesh.vertices[ed.b];
    double int_avg = 0.0, int_jump = 0.0;
    const auto piece = [&](Vec2 p0, Vec2 p1) {
      const double len = norm(p1 - p0);
      if (len <= 0.0) return;
      for (const auto& q : segment_rule(5)) {
        const Vec2 x = p0 + (p1 - p0) * q.t;
        const double w = q.w * len;
        const double v1 = value(ie.t1, x);
        const double v2 = value(ie.t2, x);
        const Vec2 g1 = grad(ie.t1, x);
        const Vec2 g2 = grad(ie.t2, x);
        const Side s1 = cls.quad_side(ie.t1, x);
        const Side s2 = cls.quad_side(ie.t2, x);
        const Vec2 avg =
            0.5 * (beta(x, s1) * g1 + beta(x, s2) * g2);
        int_avg += w * norm_sq(avg);
        const double j = v1 - v2;
        int_jump += w * j * j;
      }
    };
    piece(a, ie.root);
    piece(ie.root, b);
    avg_sq += h * int_avg;
    jump_sq += int_jump / h;
  }
}

}  // namespace

ErrorReport compute_errors(const DiscreteSolution& sol,
                           const TwoSidedSolution& exact,
                           const Coefficients& beta, int quad_order) {
  const TriMesh& mesh = *sol.mesh;
  const MeshClassification& cls = *sol.cls;
  ErrorReport rep;
  rep.N = mesh.N;
  rep.h = mesh.h;

  double l2 = 0.0, h1 = 0.0;
  const int nt = static_cast<int>(mesh.triangles.size());
  for (int t = 0; t < nt; ++t) {
    const auto tri = mesh.tri_vertices(t);
    const auto& ec = cls.elements[t];
    // the exact branch follows the sub-element tag: on the thin region
    // between the true interface and its chord, the matching smooth branch
    // is compared against the discrete piece defined there, so the error
    // integral never picks up the O(1) inter-branch jump scaled by the
    // larger coefficient
    const auto accumulate = [&](Vec2 x, double w, Side tag) {
      const double ue = exact.value(x, tag);
      const Vec2 ge = exact.gradient(x, tag);
      const double uh = sol.eval_in(t, x, tag);
      const Vec2 gh = sol.grad_in(t, tag);
      const double d = ue - uh;
      l2 += w * d * d;
      h1 += w * beta(x, tag) * norm_sq(ge - gh);
    };
    if (!ec.cut) {
      const double area = 0.5 * cross(tri[1] - tri[0], tri[2] - tri[0]);
      for (const auto& q : triangle_rule(quad_order))
        accumulate(bary_point(tri, q), q.w * area, ec.side);
    } else {
      const auto cq = cut_quadrature(tri, *ec.cut, quad_order);
      for (const auto& q : cq.points) accumulate(q.x, q.w, q.tag);
    }
  }
  rep.l2_error = std::sqrt(l2);
  rep.h1_error = std::sqrt(h1);

  // error-field interface-edge terms: both branches follow each element's
  // cut line so the trace comparison stays branch-consistent
  const auto err_value = [&](int t, Vec2 x) {
    const Side s = cls.quad_side(t, x);
    return exact.value(x, s) - sol.eval_in(t, x, s);
  };
  const auto err_grad = [&](int t, Vec2 x) {
    const Side s = cls.quad_side(t, x);
    return exact.gradient(x, s) - sol.grad_in(t, s);
  };
  edge_terms(mesh, cls, beta, mesh.h, err_value, err_grad, rep.edge_avg_sq,
             rep.edge_jump_sq);

  // stabilization term of the error: the exact solution is continuous across
  // edges, so only the discrete jump contributes; reuse the assembled form
  // through the cached lifting data would need the system, so recompute from
  // the bases
  double sh = 0.0;
  for (const auto& ie : cls.interface_edges) {
    const auto& ed = mesh.edges[ie.edge_id];
    LiftEdge le;
    le.a = mesh.vertices[ed.a];
    le.b = mesh.vertices[ed.b];
    le.p = ie.root;
    le.side_ap = cls.vertex_sign[ed.a] > 0 ? Side::plus : Side::minus;
    le.n_e = ie.n_e;
    const LiftElem& e1 = *sol.bases->lift[ie.t1];
    const LiftElem& e2 = *sol.bases->lift[ie.t2];
    const auto jump_fn = [&](Vec2 x) {
      return sol.eval_in(ie.t1, x, cls.quad_side(ie.t1, x)) -
             sol.eval_in(ie.t2, x, cls.quad_side(ie.t2, x));
    };
    LiftingField r;
    if (!beta.variable) {
      r = lift_jump(le, e1, e2, jump_fn);
    } else {
      r = lift_jump_variable(le, e1, e2, jump_fn,
                             [&](Vec2 x, Side s) { return beta(x, s); });
    }
    sh += kStabilizationWeight * lifting_inner(r, r, e1, e2);
  }
  rep.sh_sq = sh;
  return rep;
}

RateTable fit_rates(const std::vector<ErrorReport>& reports) {
  if (reports.size() < 2)
    throw InsufficientData("rate fitting needs at least two refinements");
  for (size_t i = 1; i < reports.size(); ++i)
    if (!(reports[i].h < reports[i - 1].h))
      throw InsufficientData("rate fitting needs strictly decreasing h");

  RateTable table;
  for (size_t i = 0; i < reports.size(); ++i) {
    RateRow row;
    row.N = reports[i].N;
    row.h = reports[i].h;
    row.l2_error = reports[i].l2_error;
    row.h1_error = reports[i].h1_error;
    if (i > 0) {
      const double hr =
          std::log2(reports[i - 1].h / reports[i].h);
      row.l2_rate =
          std::log2(reports[i - 1].l2_error / reports[i].l2_error) / hr;
      row.h1_rate =
          std::log2(reports[i - 1].h1_error / reports[i].h1_error) / hr;
    }
    table.rows.push_back(row);
  }

  // least-squares slope over the finest levels
  const auto slope = [&](auto err) {
    const size_t m = std::min<size_t>(3, reports.size());
    const size_t off = reports.size() - m;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = off; i < reports.size(); ++i) {
      const double x = std::log2(reports[i].h);
      const double y = std::log2(err(reports[i]));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = static_cast<double>(m);
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  table.l2_slope = slope([](const ErrorReport& r) { return r.l2_error; });
  table.h1_slope = slope([](const ErrorReport& r) { return r.h1_error; });
  return table;
}

void write_rates_csv(const RateTable& table, std::ostream& os) {
  os << "N,h,l2_error,l2_rate,h1_error,h1_rate\n";
  char buf[64];
  const auto sci = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.3E", v);
    return std::string(buf);
  };
  const auto rate = [&buf](const std::optional<double>& r) {
    if (!r) return std::string();
    std::snprintf(buf, sizeof(buf), "%.2f", *r);
    return std::string(buf);
  };
  for (const auto& row : table.rows) {
    os << row.N << "," << sci(row.h) << "," << sci(row.l2_error) << ","
       << rate(row.l2_rate) << "," << sci(row.h1_error) << ","
       << rate(row.h1_rate) << "\n";
  }
}

NormBreakdown discrete_norms(const Eigen::VectorXd& v, const LinearSystem& sys,
                             const TriMesh& mesh,
                             const MeshClassification& cls,
                             const BasisCache& bases,
                             const Coefficients& beta) {
  NormBreakdown nb;
  nb.vol_sq = v.dot(sys.K * v);
  nb.sh_sq = v.dot(sys.S * v);
  const auto nodal = [&](int t) {
    const auto& vid = mesh.triangles[t];
    return std::array<double, 3>{v[vid[0]], v[vid[1]], v[vid[2]]};
  };
  const auto value = [&](int t, Vec2 x) {
    return bases.eval_in(t, x, cls.quad_side(t, x), nodal(t));
  };
  const auto grad = [&](int t, Vec2 x) {
    return bases.grad_in(t, cls.quad_side(t, x), nodal(t));
  };
  edge_terms(mesh, cls, beta, mesh.h, value, grad, nb.edge_avg_sq,
             nb.edge_jump_sq);
  return nb;
}

}  // namespace ppife
