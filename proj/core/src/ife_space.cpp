#include "ppife/ife_space.hpp"

#include <cmath>

namespace ppife {

HatBasis p1_hats(const std::array<Vec2, 3>& tri) {
  HatBasis h;
  const double twoA = cross(tri[1] - tri[0], tri[2] - tri[0]);
  h.area = 0.5 * twoA;
  for (int i = 0; i < 3; ++i) {
    const Vec2& pj = tri[(i + 1) % 3];
    const Vec2& pk = tri[(i + 2) % 3];
    h.lambda[i].c = cross(pj, pk) / twoA;
    h.lambda[i].g = Vec2{pj.y - pk.y, pk.x - pj.x} / twoA;
  }
  return h;
}

IfeBasis build_ife_basis(const std::array<Vec2, 3>& tri, const CutSegment& seg,
                         double beta_plus, double beta_minus) {
  IfeBasis b;
  b.tri = tri;
  b.seg = seg;
  b.beta_plus = beta_plus;
  b.beta_minus = beta_minus;
  b.hats = p1_hats(tri);

  const double tol = 0.0;
  std::array<double, 3> w_nodal{};
  for (int i = 0; i < 3; ++i) {
    b.vertex_side[i] = seg.side_of(tri[i], tol);
    w_nodal[i] =
        b.vertex_side[i] == Side::plus ? seg.line_value(tri[i]) : 0.0;
  }

  // interpolant of the one-sided distance function
  Affine2 iw;
  for (int i = 0; i < 3; ++i) iw = iw + b.hats.lambda[i] * w_nodal[i];
  b.mu = dot(iw.g, seg.n_h);

  const double rho = beta_minus / beta_plus;
  b.denom = 1.0 + (rho - 1.0) * b.mu;
  if (std::abs(b.denom) < 1e-12) throw SingularBasis(b.denom);

  // signed distance to the cut line as an affine function
  const Affine2 dline{-dot(seg.D, seg.n_h), seg.n_h};
  for (int i = 0; i < 3; ++i) {
    const double ci =
        (rho - 1.0) * dot(b.hats.lambda[i].g, seg.n_h) / b.denom;
    b.phi[i].plus = b.hats.lambda[i] + (dline - iw) * ci;
    b.phi[i].minus = b.hats.lambda[i] - iw * ci;
  }
  return b;
}

PiecewiseAffine expand(const IfeBasis& b, const std::array<double, 3>& nodal) {
  PiecewiseAffine f;
  for (int i = 0; i < 3; ++i) {
    f.plus = f.plus + b.phi[i].plus * nodal[i];
    f.minus = f.minus + b.phi[i].minus * nodal[i];
  }
  return f;
}

AuxiliaryTriple build_auxiliary(const std::array<Vec2, 3>& tri,
                                const CutSegment& seg, double beta_plus,
                                double beta_minus) {
  const IfeBasis b = build_ife_basis(tri, seg, beta_plus, beta_minus);
  AuxiliaryTriple aux;

  const auto one_sided_correction = [&](const Affine2& v) {
    // z = v on the plus side, 0 on the minus side; return z minus its
    // nodal interpolant in the cut-element shape space
    std::array<double, 3> nodal{};
    for (int i = 0; i < 3; ++i)
      nodal[i] = b.vertex_side[i] == Side::plus ? v(tri[i]) : 0.0;
    const PiecewiseAffine iz = expand(b, nodal);
    PiecewiseAffine out;
    out.plus = v - iz.plus;
    out.minus = Affine2{} - iz.minus;
    return out;
  };

  // unit flux jump, zero value jump: v = (x-D).n_h / beta_plus
  aux.upsilon = one_sided_correction(
      Affine2{-dot(seg.D, seg.n_h) / beta_plus, seg.n_h / beta_plus});

  // unit value jump at D (E), zero flux jump: v affine along t_h
  const double L = dot(seg.E - seg.D, seg.t_h);  // +-|E-D|
  const Affine2 ramp{-dot(seg.D, seg.t_h) / L, seg.t_h / L};  // 0 at D, 1 at E
  aux.psi_E = one_sided_correction(ramp);
  aux.psi_D = one_sided_correction(Affine2{1.0 - ramp.c, -ramp.g});

  return aux;
}

}  // namespace ppife
