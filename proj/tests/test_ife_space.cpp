#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "ppife/ife_space.hpp"

using namespace ppife;

namespace {

const std::array<Vec2, 3> kRight = {Vec2{0.0, 0.0}, Vec2{1.0, 0.0},
                                    Vec2{0.0, 1.0}};

// random cut of the unit right triangle crossing two distinct edges
CutSegment random_cut(std::mt19937& g) {
  std::uniform_real_distribution<double> u(0.1, 0.9);
  std::uniform_int_distribution<int> pick(0, 2);
  const int skip = pick(g);  // the uncrossed edge
  const std::array<std::array<int, 2>, 3> edges = {
      {{0, 1}, {1, 2}, {2, 0}}};
  std::array<Vec2, 2> pts;
  int k = 0;
  for (int e = 0; e < 3; ++e) {
    if (e == skip) continue;
    const Vec2 a = kRight[edges[e][0]], b = kRight[edges[e][1]];
    pts[k++] = a + (b - a) * u(g);
  }
  // the shared vertex of the two crossed edges sits alone on one side
  return make_cut_segment(pts[0], pts[1],
                          kRight[0] + kRight[1] + kRight[2] -
                              1.5 * (pts[0] + pts[1]));
}

// dense solve of the six defining constraints of one shape function
PiecewiseAffine dense_shape(const std::array<Vec2, 3>& tri,
                            const CutSegment& seg, double bp, double bm,
                            int node) {
  Eigen::Matrix<double, 6, 6> M = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 1> rhs = Eigen::Matrix<double, 6, 1>::Zero();
  // unknowns: (c+, gx+, gy+, c-, gx-, gy-)
  for (int i = 0; i < 3; ++i) {
    const bool plus = seg.side_of(tri[i]) != Side::minus;
    const int off = plus ? 0 : 3;
    M(i, off) = 1.0;
    M(i, off + 1) = tri[i].x;
    M(i, off + 2) = tri[i].y;
    rhs(i) = (i == node) ? 1.0 : 0.0;
  }
  for (int k = 0; k < 2; ++k) {  // continuity at both cut points
    const Vec2 p = k == 0 ? seg.D : seg.E;
    M(3 + k, 0) = 1.0;
    M(3 + k, 1) = p.x;
    M(3 + k, 2) = p.y;
    M(3 + k, 3) = -1.0;
    M(3 + k, 4) = -p.x;
    M(3 + k, 5) = -p.y;
  }
  M(5, 1) = bp * seg.n_h.x;  // matched weighted normal slope
  M(5, 2) = bp * seg.n_h.y;
  M(5, 4) = -bm * seg.n_h.x;
  M(5, 5) = -bm * seg.n_h.y;

  const Eigen::Matrix<double, 6, 1> c = M.fullPivLu().solve(rhs);
  PiecewiseAffine out;
  out.plus = Affine2{c(0), Vec2{c(1), c(2)}};
  out.minus = Affine2{c(3), Vec2{c(4), c(5)}};
  return out;
}

}  // namespace

TEST_CASE("p1_hats: Kronecker, partition of unity, area") {
  const std::array<Vec2, 3> tri = {Vec2{0.1, 0.2}, Vec2{1.4, 0.3},
                                   Vec2{0.5, 1.7}};
  const HatBasis h = p1_hats(tri);
  CHECK(h.area ==
        doctest::Approx(0.5 * cross(tri[1] - tri[0], tri[2] - tri[0]))
            .epsilon(1e-14));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(h.lambda[i](tri[j]) == doctest::Approx(i == j ? 1.0 : 0.0)
                                       .epsilon(1e-13));
  const Vec2 x{0.6, 0.7};
  double sum = 0.0;
  Vec2 gsum{0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    sum += h.lambda[i](x);
    gsum += h.lambda[i].g;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(norm(gsum) < 1e-13);
}

TEST_CASE("cut basis satisfies its six defining constraints") {
  std::mt19937 g(42);
  std::uniform_real_distribution<double> lb(-3.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const CutSegment seg = random_cut(g);
    const double bp = std::pow(10.0, lb(g)), bm = std::pow(10.0, lb(g));
    const IfeBasis b = build_ife_basis(kRight, seg, bp, bm);
    for (int i = 0; i < 3; ++i) {
      const auto& phi = b.phi[i];
      for (int j = 0; j < 3; ++j) {
        const double v = phi.eval(kRight[j], b.vertex_side[j]);
        CHECK(std::abs(v - (i == j ? 1.0 : 0.0)) < 1e-11);
      }
      CHECK(std::abs(phi.plus(seg.D) - phi.minus(seg.D)) < 1e-12);
      CHECK(std::abs(phi.plus(seg.E) - phi.minus(seg.E)) < 1e-12);
      const double flux_gap = bp * dot(phi.plus.g, seg.n_h) -
                              bm * dot(phi.minus.g, seg.n_h);
      CHECK(std::abs(flux_gap) <
            1e-11 * std::max(1.0, std::abs(bp * dot(phi.plus.g, seg.n_h))));
      // vertex sides recorded consistently with the cut line
      CHECK(b.vertex_side[i] == seg.side_of(kRight[i]));
    }
    // partition of unity on both sides
    Affine2 sp = b.phi[0].plus + b.phi[1].plus + b.phi[2].plus;
    Affine2 sm = b.phi[0].minus + b.phi[1].minus + b.phi[2].minus;
    CHECK(std::abs(sp.c - 1.0) < 1e-11);
    CHECK(norm(sp.g) < 1e-11);
    CHECK(std::abs(sm.c - 1.0) < 1e-11);
    CHECK(norm(sm.g) < 1e-11);
    // geometric bounds of the construction on right triangles
    CHECK(b.mu >= -1e-12);
    CHECK(b.mu <= 1.0 + 1e-12);
    CHECK(std::abs(b.denom) >=
          (1.0 - 1e-10) * std::min(1.0, bm / bp));
  }
}

TEST_CASE("cut basis agrees with a dense constraint solve") {
  std::mt19937 g(7);
  std::uniform_real_distribution<double> lb(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const CutSegment seg = random_cut(g);
    const double bp = std::pow(10.0, lb(g)), bm = std::pow(10.0, lb(g));
    const IfeBasis b = build_ife_basis(kRight, seg, bp, bm);
    for (int i = 0; i < 3; ++i) {
      const PiecewiseAffine ref = dense_shape(kRight, seg, bp, bm, i);
      CHECK(std::abs(b.phi[i].plus.c - ref.plus.c) < 1e-10);
      CHECK(norm(b.phi[i].plus.g - ref.plus.g) < 1e-10);
      CHECK(std::abs(b.phi[i].minus.c - ref.minus.c) < 1e-10);
      CHECK(norm(b.phi[i].minus.g - ref.minus.g) < 1e-10);
    }
  }
}

TEST_CASE("matched coefficients collapse the cut basis onto the hats") {
  std::mt19937 g(11);
  for (int trial = 0; trial < 50; ++trial) {
    const CutSegment seg = random_cut(g);
    const IfeBasis b = build_ife_basis(kRight, seg, 7.5, 7.5);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(b.phi[i].plus.c - b.hats.lambda[i].c) < 1e-12);
      CHECK(norm(b.phi[i].plus.g - b.hats.lambda[i].g) < 1e-12);
      CHECK(std::abs(b.phi[i].minus.c - b.hats.lambda[i].c) < 1e-12);
      CHECK(norm(b.phi[i].minus.g - b.hats.lambda[i].g) < 1e-12);
    }
  }
}

TEST_CASE("relabeling the sides leaves the shape functions unchanged") {
  std::mt19937 g(17);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec2 D = kRight[0] + (kRight[1] - kRight[0]) * u(g);
    const Vec2 E = kRight[0] + (kRight[2] - kRight[0]) * u(g);
    const Vec2 hint = kRight[1] + kRight[2] - 2.0 * kRight[0];
    const CutSegment seg = make_cut_segment(D, E, hint);
    const CutSegment rev = make_cut_segment(D, E, -1.0 * hint);
    const double bp = 250.0, bm = 0.8;
    const IfeBasis b = build_ife_basis(kRight, seg, bp, bm);
    // same physical sides, opposite labels and swapped coefficients
    const IfeBasis r = build_ife_basis(kRight, rev, bm, bp);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(b.phi[i].plus.c - r.phi[i].minus.c) < 1e-11);
      CHECK(norm(b.phi[i].plus.g - r.phi[i].minus.g) < 1e-11);
      CHECK(std::abs(b.phi[i].minus.c - r.phi[i].plus.c) < 1e-11);
      CHECK(norm(b.phi[i].minus.g - r.phi[i].plus.g) < 1e-11);
    }
  }
}

TEST_CASE("expand is the nodal linear combination") {
  std::mt19937 g(23);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const CutSegment seg = random_cut(g);
  const IfeBasis b = build_ife_basis(kRight, seg, 30.0, 1.0);
  const std::array<double, 3> nodal = {u(g), u(g), u(g)};
  const PiecewiseAffine v = expand(b, nodal);
  for (const Side s : {Side::plus, Side::minus}) {
    for (int k = 0; k < 20; ++k) {
      const Vec2 x{u(g), u(g)};
      double want = 0.0;
      for (int i = 0; i < 3; ++i) want += nodal[i] * b.phi[i].eval(x, s);
      CHECK(v.eval(x, s) == doctest::Approx(want).epsilon(1e-12));
    }
  }
  // nodal values reproduced
  for (int i = 0; i < 3; ++i)
    CHECK(v.eval(kRight[i], b.vertex_side[i]) ==
          doctest::Approx(nodal[i]).epsilon(1e-11));
}

TEST_CASE("an obtuse corner cut can make the construction singular") {
  const double s3 = std::sqrt(3.0);
  const std::array<Vec2, 3> tri = {Vec2{0.0, 0.0}, Vec2{-s3, 1.0},
                                   Vec2{1.0, 0.0}};
  const Vec2 D{0.0, 0.0};
  const Vec2 E{-1.0 / (2.0 + s3), s3 / (2.0 + s3)};
  const CutSegment seg = make_cut_segment(D, E, tri[1] - (D + E) * 0.5);
  CHECK_THROWS_AS(build_ife_basis(tri, seg, 1.0, 3.0), SingularBasis);
  try {
    build_ife_basis(tri, seg, 1.0, 3.0);
  } catch (const SingularBasis& e) {
    CHECK(std::abs(e.denominator) < 1e-10);
  }
  // the same cut with a harmless coefficient pair still works
  const IfeBasis ok = build_ife_basis(tri, seg, 1.0, 1.5);
  CHECK(std::abs(ok.denom) > 0.1);
}

TEST_CASE("auxiliary fields: vertex vanishing and unit jump signatures") {
  std::mt19937 g(29);
  for (int trial = 0; trial < 100; ++trial) {
    const CutSegment seg = random_cut(g);
    const double bp = 40.0, bm = 2.5;
    const AuxiliaryTriple aux = build_auxiliary(kRight, seg, bp, bm);
    const IfeBasis b = build_ife_basis(kRight, seg, bp, bm);

    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(aux.upsilon.eval(kRight[i], b.vertex_side[i])) < 1e-11);
      CHECK(std::abs(aux.psi_D.eval(kRight[i], b.vertex_side[i])) < 1e-11);
      CHECK(std::abs(aux.psi_E.eval(kRight[i], b.vertex_side[i])) < 1e-11);
    }

    const auto value_jump = [&](const PiecewiseAffine& v, Vec2 x) {
      return v.plus(x) - v.minus(x);
    };
    const auto flux_jump = [&](const PiecewiseAffine& v) {
      return bp * dot(v.plus.g, seg.n_h) - bm * dot(v.minus.g, seg.n_h);
    };

    const Vec2 mid = (seg.D + seg.E) * 0.5;
    CHECK(std::abs(value_jump(aux.upsilon, seg.D)) < 1e-11);
    CHECK(std::abs(value_jump(aux.upsilon, seg.E)) < 1e-11);
    CHECK(std::abs(value_jump(aux.upsilon, mid)) < 1e-11);
    CHECK(flux_jump(aux.upsilon) == doctest::Approx(1.0).epsilon(1e-10));

    CHECK(value_jump(aux.psi_D, seg.D) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(value_jump(aux.psi_D, seg.E)) < 1e-11);
    CHECK(std::abs(flux_jump(aux.psi_D)) < 1e-10);

    CHECK(value_jump(aux.psi_E, seg.E) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(value_jump(aux.psi_E, seg.D)) < 1e-11);
    CHECK(std::abs(flux_jump(aux.psi_E)) < 1e-10);
  }
}

TEST_CASE("interpolation defect decomposes over the auxiliary fields") {
  // for a vertex-vanishing piecewise affine pair v, the shape-space
  // interpolant defect v - Iv equals the jump-weighted auxiliary sum
  std::mt19937 g(31);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 100; ++trial) {
    const CutSegment seg = random_cut(g);
    const double bp = 15.0, bm = 0.5;
    const IfeBasis b = build_ife_basis(kRight, seg, bp, bm);
    const AuxiliaryTriple aux = build_auxiliary(kRight, seg, bp, bm);

    // random two-sided affine data, then remove the vertex values by
    // subtracting the shape-space interpolant
    PiecewiseAffine v;
    v.plus = Affine2{u(g), Vec2{u(g), u(g)}};
    v.minus = Affine2{u(g), Vec2{u(g), u(g)}};
    std::array<double, 3> nodal{};
    for (int i = 0; i < 3; ++i) nodal[i] = v.eval(kRight[i], b.vertex_side[i]);
    const PiecewiseAffine iv = expand(b, nodal);

    const double jD = v.plus(seg.D) - v.minus(seg.D);
    const double jE = v.plus(seg.E) - v.minus(seg.E);
    const double jF =
        bp * dot(v.plus.g, seg.n_h) - bm * dot(v.minus.g, seg.n_h);

    for (const Side s : {Side::plus, Side::minus}) {
      for (int k = 0; k < 10; ++k) {
        const Vec2 x{u(g), u(g)};
        const double defect = v.eval(x, s) - iv.eval(x, s);
        const double sum = jD * aux.psi_D.eval(x, s) +
                           jE * aux.psi_E.eval(x, s) +
                           jF * aux.upsilon.eval(x, s);
        CHECK(std::abs(defect - sum) < 1e-10);
      }
    }
  }
}
