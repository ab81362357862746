#include "ppife/ife3d.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace ppife {

namespace {

// in-plane frame: project the global axis least aligned with n
void make_frame(Vec3 n, Vec3& t1, Vec3& t2) {
  const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
  Vec3 e{1.0, 0.0, 0.0};
  if (ay <= ax && ay <= az)
    e = {0.0, 1.0, 0.0};
  else if (az <= ax && az <= ay)
    e = {0.0, 0.0, 1.0};
  t1 = normalized(e - dot(e, n) * n);
  t2 = cross(n, t1);
}

}  // namespace

TangentPlaneCut make_tangent_cut(const Tet& tet, Vec3 xstar, Vec3 normal) {
  TangentPlaneCut cut;
  cut.xstar = xstar;
  cut.n_h = normalized(normal);
  make_frame(cut.n_h, cut.t1_h, cut.t2_h);
  for (const auto& piece : split_tet(tet, cut)) {
    if (piece.tag == Side::plus)
      cut.vol_plus += piece.volume();
    else
      cut.vol_minus += piece.volume();
  }
  return cut;
}

HatBasis3 p1_hats_3d(const Tet& tet) {
  Eigen::Matrix4d M;
  for (int i = 0; i < 4; ++i)
    M.row(i) << 1.0, tet[i].x, tet[i].y, tet[i].z;
  const double det = M.determinant();
  HatBasis3 h;
  h.volume = std::abs(det) / 6.0;
  if (!(h.volume > 1e-300)) throw Error("degenerate tetrahedron");
  const Eigen::Matrix4d inv = M.inverse();
  for (int i = 0; i < 4; ++i)
    h.lambda[i] = {inv(0, i), {inv(1, i), inv(2, i), inv(3, i)}};
  return h;
}

AngleReport check_tet_angles(const Tet& tet) {
  AngleReport rep;
  const auto angle = [](Vec3 u, Vec3 v) {
    return std::acos(
        std::clamp(dot(u, v) / (norm(u) * norm(v)), -1.0, 1.0));
  };
  // face angles: each face, each corner
  for (int f = 0; f < 4; ++f) {
    int idx[3], k = 0;
    for (int i = 0; i < 4; ++i)
      if (i != f) idx[k++] = i;
    for (int c = 0; c < 3; ++c) {
      const Vec3 p = tet[idx[c]];
      const Vec3 u = tet[idx[(c + 1) % 3]] - p;
      const Vec3 v = tet[idx[(c + 2) % 3]] - p;
      rep.max_face_angle = std::max(rep.max_face_angle, angle(u, v));
    }
  }
  // dihedral angles: each edge, between the projections of the two opposite
  // vertices onto the plane orthogonal to the edge
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const Vec3 e = normalized(tet[j] - tet[i]);
      Vec3 other[2];
      int k = 0;
      for (int m = 0; m < 4; ++m)
        if (m != i && m != j) other[k++] = tet[m];
      const Vec3 u = (other[0] - tet[i]) - dot(other[0] - tet[i], e) * e;
      const Vec3 v = (other[1] - tet[i]) - dot(other[1] - tet[i], e) * e;
      rep.max_dihedral_angle = std::max(rep.max_dihedral_angle, angle(u, v));
    }
  }
  const double right = 0.5 * std::numbers::pi + 1e-12;
  rep.ok = rep.max_face_angle <= right && rep.max_dihedral_angle <= right;
  return rep;
}

IfeBasis3 build_ife_basis_3d(const Tet& tet, const TangentPlaneCut& cut,
                             double beta_plus, double beta_minus) {
  IfeBasis3 b;
  b.tet = tet;
  b.cut = cut;
  b.beta_plus = beta_plus;
  b.beta_minus = beta_minus;
  b.hats = p1_hats_3d(tet);
  b.angle_ok = check_tet_angles(tet).ok;

  Affine3 iw{0.0, {0.0, 0.0, 0.0}};
  for (int i = 0; i < 4; ++i) {
    b.w_nodal[i] = std::max(cut.plane_value(tet[i]), 0.0);
    iw = iw + b.hats.lambda[i] * b.w_nodal[i];
  }
  b.mu = dot(iw.g, cut.n_h);
  const double rho = beta_minus / beta_plus;
  b.denom = 1.0 + (rho - 1.0) * b.mu;
  if (std::abs(b.denom) < 1e-12) throw SingularBasis(b.denom);

  const Affine3 dplane{-dot(cut.xstar, cut.n_h), cut.n_h};
  for (int j = 0; j < 4; ++j) {
    const double gj = dot(b.hats.lambda[j].g, cut.n_h);
    const double c = (rho - 1.0) * gj / b.denom;
    b.phi[j].plus = b.hats.lambda[j] + (dplane - iw) * c;
    b.phi[j].minus = b.hats.lambda[j] - iw * c;
  }
  return b;
}

PiecewiseAffine3 interpolate_3d(const IfeBasis3& basis,
                                const std::array<double, 4>& nodal) {
  PiecewiseAffine3 out;
  out.plus = {0.0, {0.0, 0.0, 0.0}};
  out.minus = {0.0, {0.0, 0.0, 0.0}};
  for (int i = 0; i < 4; ++i) {
    out.plus = out.plus + basis.phi[i].plus * nodal[i];
    out.minus = out.minus + basis.phi[i].minus * nodal[i];
  }
  return out;
}

Auxiliary3 build_auxiliary_3d(const Tet& tet, const TangentPlaneCut& cut,
                              double beta_plus, double beta_minus) {
  const IfeBasis3 basis = build_ife_basis_3d(tet, cut, beta_plus, beta_minus);
  // z = v on the plus side, 0 on the minus side; the auxiliary field is
  // z - interp(z), which vanishes at the vertices and inherits the jump of z
  const auto one_sided = [&](const Affine3& v) {
    std::array<double, 4> nodal{};
    for (int i = 0; i < 4; ++i)
      nodal[i] = cut.plane_value(tet[i]) > 0.0 ? v(tet[i]) : 0.0;
    const PiecewiseAffine3 iz = interpolate_3d(basis, nodal);
    PiecewiseAffine3 out;
    out.plus = v - iz.plus;
    out.minus = iz.minus * -1.0;
    return out;
  };
  Auxiliary3 aux;
  aux.psi = one_sided({1.0, {0.0, 0.0, 0.0}});
  aux.upsilon = one_sided(
      {-dot(cut.xstar, cut.n_h) / beta_plus, cut.n_h / beta_plus});
  aux.theta1 = one_sided({-dot(cut.xstar, cut.t1_h), cut.t1_h});
  aux.theta2 = one_sided({-dot(cut.xstar, cut.t2_h), cut.t2_h});
  return aux;
}

CutType classify_cut_type(const Tet& tet, Vec3 point, Vec3 normal) {
  const Vec3 n = normalized(normal);
  const double snap = 1e-12 * tet_diameter(tet);
  int np = 0, nm = 0, nz = 0;
  for (const auto& v : tet) {
    const double d = dot(v - point, n);
    if (d > snap)
      ++np;
    else if (d < -snap)
      ++nm;
    else
      ++nz;
  }
  if (np == 0 || nm == 0) return CutType::none;
  if (nz > 0) throw DegenerateCut();
  return np * nm == 3 ? CutType::three_edge : CutType::four_edge;
}

std::vector<TaggedTet> split_tet(const Tet& tet, const TangentPlaneCut& cut) {
  const double snap = 1e-12 * tet_diameter(tet);
  std::array<double, 4> d;
  int np = 0, nm = 0;
  std::vector<int> pos, neg, zer;
  for (int i = 0; i < 4; ++i) {
    d[i] = cut.plane_value(tet[i]);
    if (std::abs(d[i]) <= snap) d[i] = 0.0;
    if (d[i] > 0.0) {
      pos.push_back(i);
      ++np;
    } else if (d[i] < 0.0) {
      neg.push_back(i);
      ++nm;
    } else {
      zer.push_back(i);
    }
  }
  std::vector<TaggedTet> out;
  if (np == 0 || nm == 0) {
    out.push_back({tet, nm > 0 ? Side::minus : Side::plus});
    return out;
  }
  const auto crossing = [&](int i, int j) {
    return tet[i] + (tet[j] - tet[i]) * (d[i] / (d[i] - d[j]));
  };
  const auto emit = [&out](Vec3 a, Vec3 b, Vec3 c, Vec3 e, Side tag) {
    TaggedTet t{{a, b, c, e}, tag};
    if (t.volume() > 1e-300) out.push_back(t);
  };
  // prism (A,B,C | A',B',C') with A above A' etc.
  const auto emit_prism = [&emit](Vec3 A, Vec3 B, Vec3 C, Vec3 Ap, Vec3 Bp,
                                  Vec3 Cp, Side tag) {
    emit(A, B, C, Ap, tag);
    emit(B, C, Ap, Bp, tag);
    emit(C, Ap, Bp, Cp, tag);
  };

  if (np == 1 && nm == 3) {
    const int a = pos[0];
    const Vec3 P0 = crossing(a, neg[0]);
    const Vec3 P1 = crossing(a, neg[1]);
    const Vec3 P2 = crossing(a, neg[2]);
    emit(tet[a], P0, P1, P2, Side::plus);
    emit_prism(tet[neg[0]], tet[neg[1]], tet[neg[2]], P0, P1, P2,
               Side::minus);
  } else if (np == 3 && nm == 1) {
    const int a = neg[0];
    const Vec3 P0 = crossing(a, pos[0]);
    const Vec3 P1 = crossing(a, pos[1]);
    const Vec3 P2 = crossing(a, pos[2]);
    emit(tet[a], P0, P1, P2, Side::minus);
    emit_prism(tet[pos[0]], tet[pos[1]], tet[pos[2]], P0, P1, P2, Side::plus);
  } else if (np == 2 && nm == 2) {
    const int a = pos[0], b = pos[1], c = neg[0], e = neg[1];
    const Vec3 Pac = crossing(a, c), Pad = crossing(a, e);
    const Vec3 Pbc = crossing(b, c), Pbd = crossing(b, e);
    emit(tet[a], tet[b], Pbc, Pbd, Side::plus);
    emit(tet[a], Pac, Pbc, Pbd, Side::plus);
    emit(tet[a], Pac, Pbd, Pad, Side::plus);
    emit(tet[c], tet[e], Pad, Pbd, Side::minus);
    emit(tet[c], Pac, Pad, Pbd, Side::minus);
    emit(tet[c], Pac, Pbd, Pbc, Side::minus);
  } else if (np == 1 && nm == 1) {
    // two vertices on the plane
    const Vec3 P = crossing(pos[0], neg[0]);
    emit(tet[pos[0]], P, tet[zer[0]], tet[zer[1]], Side::plus);
    emit(tet[neg[0]], P, tet[zer[0]], tet[zer[1]], Side::minus);
  } else if (np == 1 && nm == 2) {
    const int a = pos[0], z = zer[0];
    const Vec3 P0 = crossing(a, neg[0]);
    const Vec3 P1 = crossing(a, neg[1]);
    emit(tet[a], P0, P1, tet[z], Side::plus);
    emit(tet[z], tet[neg[0]], tet[neg[1]], P1, Side::minus);
    emit(tet[z], tet[neg[0]], P1, P0, Side::minus);
  } else {  // np == 2, nm == 1
    const int a = neg[0], z = zer[0];
    const Vec3 P0 = crossing(a, pos[0]);
    const Vec3 P1 = crossing(a, pos[1]);
    emit(tet[a], P0, P1, tet[z], Side::minus);
    emit(tet[z], tet[pos[0]], tet[pos[1]], P1, Side::plus);
    emit(tet[z], tet[pos[0]], P1, P0, Side::plus);
  }
  return out;
}

const std::vector<TetRulePoint>& tet_rule(int order) {
  static const std::vector<TetRulePoint> r1 = {{0.25, 0.25, 0.25, 0.25, 1.0}};
  const auto orbit4 = [](std::vector<TetRulePoint>& r, double a, double b,
                         double w) {
    for (int i = 0; i < 4; ++i) {
      double bb[4] = {b, b, b, b};
      bb[i] = a;
      r.push_back({bb[0], bb[1], bb[2], bb[3], w});
    }
  };
  static const std::vector<TetRulePoint> r2 = [&] {
    std::vector<TetRulePoint> r;
    // (5 + 3 sqrt 5)/20 and (5 - sqrt 5)/20
    orbit4(r, 0.5854101966249685, 0.1381966011250105, 0.25);
    return r;
  }();
  static const std::vector<TetRulePoint> r3 = [&] {
    std::vector<TetRulePoint> r = {{0.25, 0.25, 0.25, 0.25, -0.8}};
    orbit4(r, 0.5, 1.0 / 6.0, 0.45);
    return r;
  }();
  switch (order) {
    case 1:
      return r1;
    case 2:
      return r2;
    case 3:
      return r3;
    default:
      throw Error("unsupported tetrahedron quadrature order " +
                  std::to_string(order));
  }
}

double integrate_tet(const Tet& tet, int order,
                     const std::function<double(Vec3)>& f) {
  const double vol = tet_volume(tet);
  double sum = 0.0;
  for (const auto& q : tet_rule(order)) {
    const Vec3 x = tet[0] * q.b0 + tet[1] * q.b1 + tet[2] * q.b2 +
                   tet[3] * q.b3;
    sum += q.w * f(x);
  }
  return sum * vol;
}

namespace {

double integrate_side_rec(const Tet& tet, const ScalarField3& phi, Side side,
                          const std::function<double(Vec3)>& f, int depth) {
  // sample vertices, edge midpoints and the centroid
  Vec3 samples[11];
  int k = 0;
  Vec3 centroid{0.0, 0.0, 0.0};
  for (int i = 0; i < 4; ++i) {
    samples[k++] = tet[i];
    centroid += tet[i] * 0.25;
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) samples[k++] = (tet[i] + tet[j]) * 0.5;
  samples[k++] = centroid;
  bool any_pos = false, any_neg = false;
  for (const Vec3& s : samples) {
    (phi.value(s) >= 0.0 ? any_pos : any_neg) = true;
  }
  if (!any_neg) return side == Side::plus ? integrate_tet(tet, 2, f) : 0.0;
  if (!any_pos) return side == Side::minus ? integrate_tet(tet, 2, f) : 0.0;

  if (depth == 0) {
    // resolve the leaf against the linearized surface
    const double v0 = phi.value(centroid);
    const Vec3 g = phi.gradient(centroid);
    const double gn = norm(g);
    if (!(gn > 1e-14)) {
      const bool in = (v0 >= 0.0) == (side == Side::plus);
      return in ? integrate_tet(tet, 2, f) : 0.0;
    }
    TangentPlaneCut plane;
    plane.xstar = centroid - g * (v0 / (gn * gn));
    plane.n_h = g / gn;
    double sum = 0.0;
    for (const auto& piece : split_tet(tet, plane))
      if (piece.tag == side) sum += integrate_tet(piece.v, 2, f);
    return sum;
  }

  const Vec3 m01 = (tet[0] + tet[1]) * 0.5, m02 = (tet[0] + tet[2]) * 0.5;
  const Vec3 m03 = (tet[0] + tet[3]) * 0.5, m12 = (tet[1] + tet[2]) * 0.5;
  const Vec3 m13 = (tet[1] + tet[3]) * 0.5, m23 = (tet[2] + tet[3]) * 0.5;
  const Tet children[8] = {
      {tet[0], m01, m02, m03}, {tet[1], m01, m12, m13},
      {tet[2], m02, m12, m23}, {tet[3], m03, m13, m23},
      {m01, m23, m02, m03},    {m01, m23, m03, m13},
      {m01, m23, m13, m12},    {m01, m23, m12, m02}};
  double sum = 0.0;
  for (const Tet& ch : children)
    sum += integrate_side_rec(ch, phi, side, f, depth - 1);
  return sum;
}

}  // namespace

double integrate_tet_side(const Tet& tet, const ScalarField3& phi, Side side,
                          const std::function<double(Vec3)>& f,
                          int max_depth) {
  return integrate_side_rec(tet, phi, side, f, max_depth);
}

}  // namespace ppife
