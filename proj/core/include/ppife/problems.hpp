#pragma once

#include <string>

#include "ppife/analysis.hpp"

namespace ppife {

// A complete manufactured interface problem: geometry, coefficient, exact
// two-sided solution, source term and Dirichlet boundary trace.
struct Problem {
  std::string name;
  LevelSet geom;
  Coefficients beta;
  TwoSidedSolution exact;
  std::function<double(Vec2)> f;  // source, side resolved by the true geometry
  std::function<double(Vec2)> g;  // Dirichlet trace of the exact solution

  // side by the sign of the level set (zero set counts as plus)
  Side side_at(Vec2 x) const {
    return geom.value(x) >= 0.0 ? Side::plus : Side::minus;
  }
};

// Radial solution u = r^3/beta across a circular interface of radius r0
// centered at c, constant coefficients on each side; the jump of 1/beta is
// absorbed by a constant offset on the outside so value and flux match on the
// circle. Source f = -9r on both sides.
Problem make_disk_problem(double beta_plus, double beta_minus, double r0 = 0.5,
                          Vec2 center = {0.0, 0.0});

// Variable trigonometric coefficients across a non-convex petal-shaped
// interface; the exact solution u = phi/beta vanishes on the curve from both
// sides and has a continuous flux because beta grad u = grad phi there.
Problem make_petal_problem();

// name in {"example1", "example2"}; the beta arguments only apply to
// example1 (example2 carries its own coefficient fields).
Problem make_problem(const std::string& name, double beta_plus = 1.0,
                     double beta_minus = 1.0);

}  // namespace ppife
