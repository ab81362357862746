#include "ppife/lifting.hpp"

#include "ppife/quadrature.hpp"

namespace ppife {

namespace {

struct EdgeIntegrals {
  double phi_plus = 0.0;       // integral of the jump over the plus piece
  double phi_minus = 0.0;
  double beta_phi_plus = 0.0;  // integral of beta_h * jump per piece
  double beta_phi_minus = 0.0;
};

EdgeIntegrals edge_integrals(const LiftEdge& edge,
                             const std::function<double(Vec2)>& jump,
                             const std::function<double(Vec2, Side)>& beta_h) {
  EdgeIntegrals I;
  const int npts = 7;
  auto piece = [&](Vec2 a, Vec2 b, Side tag) {
    if (norm(b - a) <= 0.0) return;
    double ip = 0.0, ibp = 0.0;
    const double len = norm(b - a);
    for (const auto& q : segment_rule(npts)) {
      const Vec2 x = a + (b - a) * q.t;
      const double j = jump(x);
      ip += q.w * j;
      ibp += q.w * beta_h(x, tag) * j;
    }
    if (tag == Side::plus) {
      I.phi_plus += ip * len;
      I.beta_phi_plus += ibp * len;
    } else {
      I.phi_minus += ip * len;
      I.beta_phi_minus += ibp * len;
    }
  };
  piece(edge.a, edge.p, edge.side_ap);
  piece(edge.p, edge.b, opposite(edge.side_ap));
  return I;
}

}  // namespace

LiftingField lift_jump(const LiftEdge& edge, const LiftElem& e1,
                       const LiftElem& e2,
                       const std::function<double(Vec2)>& jump) {
  // both elements see the same per-side constants on the edge
  const double bp = e1.beta_plus, bm = e1.beta_minus;
  const auto beta = [bp, bm](Vec2, Side s) {
    return s == Side::plus ? bp : bm;
  };
  const EdgeIntegrals I = edge_integrals(edge, jump, beta);
  const double int_phi = I.phi_plus + I.phi_minus;
  const double int_beta_phi = I.beta_phi_plus + I.beta_phi_minus;

  LiftingField r;
  const auto coeffs = [&](const LiftElem& e, double& c, double& d) {
    c = dot(e.t_h, edge.n_e) * int_beta_phi /
        (2.0 * (e.beta_plus * e.area_plus + e.beta_minus * e.area_minus));
    d = dot(e.n_h, edge.n_e) * int_phi /
        (2.0 * (e.beta_minus * e.area_plus + e.beta_plus * e.area_minus));
  };
  coeffs(e1, r.c1, r.d1);
  coeffs(e2, r.c2, r.d2);
  return r;
}

LiftingField lift_jump_variable(
    const LiftEdge& edge, const LiftElem& e1, const LiftElem& e2,
    const std::function<double(Vec2)>& jump,
    const std::function<double(Vec2, Side)>& beta_h) {
  const EdgeIntegrals I = edge_integrals(edge, jump, beta_h);
  const double int_beta_phi = I.beta_phi_plus + I.beta_phi_minus;

  LiftingField r;
  const auto coeffs = [&](const LiftElem& e, double& c, double& d) {
    c = dot(e.t_h, edge.n_e) * int_beta_phi /
        (2.0 * (e.int_beta_plus + e.int_beta_minus));
    d = dot(e.n_h, edge.n_e) *
        (e.beta_minus * I.beta_phi_plus + e.beta_plus * I.beta_phi_minus) /
        (2.0 * (e.beta_minus * e.beta_minus * e.int_beta_plus +
                e.beta_plus * e.beta_plus * e.int_beta_minus));
  };
  coeffs(e1, r.c1, r.d1);
  coeffs(e2, r.c2, r.d2);
  return r;
}

double lifting_inner(const LiftingField& u, const LiftingField& v,
                     const LiftElem& e1, const LiftElem& e2) {
  const auto one = [](double cu, double du, double cv, double dv,
                      const LiftElem& e) {
    return cu * cv * (e.int_beta_plus + e.int_beta_minus) +
           du * dv *
               (e.beta_minus * e.beta_minus * e.int_beta_plus +
                e.beta_plus * e.beta_plus * e.int_beta_minus);
  };
  return one(u.c1, u.d1, v.c1, v.d1, e1) + one(u.c2, u.d2, v.c2, v.d2, e2);
}

double lifting_norm_sq(const LiftingField& u, const LiftElem& e1,
                       const LiftElem& e2) {
  const auto one = [](double c, double d, const LiftElem& e) {
    return c * c * (e.area_plus + e.area_minus) +
           d * d *
               (e.beta_minus * e.beta_minus * e.area_plus +
                e.beta_plus * e.beta_plus * e.area_minus);
  };
  return one(u.c1, u.d1, e1) + one(u.c2, u.d2, e2);
}

}  // namespace ppife
