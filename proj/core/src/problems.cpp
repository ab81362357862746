#include "ppife/problems.hpp"

#include <cmath>

namespace ppife {

Problem make_disk_problem(double beta_plus, double beta_minus, double r0,
                          Vec2 center) {
  Problem p;
  p.name = "example1";
  p.geom = make_level_set("circle", {{"r0", r0},
                                     {"cx", center.x},
                                     {"cy", center.y}});
  p.beta = Coefficients::constant(beta_plus, beta_minus);
  const double offset =
      (1.0 / beta_minus - 1.0 / beta_plus) * r0 * r0 * r0;
  p.exact.value = [=](Vec2 x, Side s) {
    const double r = norm(x - center);
    const double r3 = r * r * r;
    return s == Side::minus ? r3 / beta_minus : r3 / beta_plus + offset;
  };
  p.exact.gradient = [=](Vec2 x, Side s) {
    const double r = norm(x - center);
    const double b = s == Side::minus ? beta_minus : beta_plus;
    return (3.0 * r / b) * (x - center);
  };
  p.f = [=](Vec2 x) { return -9.0 * norm(x - center); };
  p.g = [exact = p.exact, geom = p.geom](Vec2 x) {
    return exact.value(x, geom.value(x) >= 0.0 ? Side::plus : Side::minus);
  };
  return p;
}

namespace {

double petal_phi(Vec2 x) {
  const double s = x.x * x.x + x.y * x.y;
  const double q = 3.0 * s - x.x;
  return q * q - s + 0.02;
}

Vec2 petal_grad_phi(Vec2 x) {
  const double s = x.x * x.x + x.y * x.y;
  const double q = 3.0 * s - x.x;
  return {2.0 * q * (6.0 * x.x - 1.0) - 2.0 * x.x,
          12.0 * q * x.y - 2.0 * x.y};
}

double petal_lap_phi(Vec2 x) {
  const double s = x.x * x.x + x.y * x.y;
  const double q = 3.0 * s - x.x;
  const double a = 6.0 * x.x - 1.0;
  return 2.0 * a * a + 72.0 * x.y * x.y + 24.0 * q - 4.0;
}

double petal_beta(Vec2 x, Side s) {
  const double th = 6.0 * (x.x + x.y);
  return s == Side::minus ? 2.0 + std::cos(th)
                          : 300.0 * (2.0 + std::sin(th));
}

// gradient of the side branch of beta
Vec2 petal_grad_beta(Vec2 x, Side s) {
  const double th = 6.0 * (x.x + x.y);
  const double d = s == Side::minus ? -6.0 * std::sin(th)
                                    : 1800.0 * std::cos(th);
  return {d, d};
}

// gradient and Laplacian of log(beta) on the given side
Vec2 petal_grad_logbeta(Vec2 x, Side s) {
  const double th = 6.0 * (x.x + x.y);
  const double d = s == Side::minus
                       ? -6.0 * std::sin(th) / (2.0 + std::cos(th))
                       : 6.0 * std::cos(th) / (2.0 + std::sin(th));
  return {d, d};
}

double petal_lap_logbeta(Vec2 x, Side s) {
  const double th = 6.0 * (x.x + x.y);
  if (s == Side::minus) {
    const double den = 2.0 + std::cos(th);
    return -72.0 * (2.0 * std::cos(th) + 1.0) / (den * den);
  }
  const double den = 2.0 + std::sin(th);
  return -72.0 * (2.0 * std::sin(th) + 1.0) / (den * den);
}

}  // namespace

Problem make_petal_problem() {
  Problem p;
  p.name = "example2";
  p.geom = make_level_set("flower");
  p.beta = Coefficients::fields(
      [](Vec2 x) { return petal_beta(x, Side::plus); },
      [](Vec2 x) { return petal_beta(x, Side::minus); });
  p.exact.value = [](Vec2 x, Side s) { return petal_phi(x) / petal_beta(x, s); };
  p.exact.gradient = [](Vec2 x, Side s) {
    const double b = petal_beta(x, s);
    return petal_grad_phi(x) / b -
           (petal_phi(x) / (b * b)) * petal_grad_beta(x, s);
  };
  // u = phi/beta gives beta grad u = grad phi - phi grad(log beta), so
  // -div(beta grad u) = -lap phi + grad phi . grad(log beta) + phi lap(log beta)
  p.f = [geom = p.geom](Vec2 x) {
    const Side s = geom.value(x) >= 0.0 ? Side::plus : Side::minus;
    return -petal_lap_phi(x) +
           dot(petal_grad_phi(x), petal_grad_logbeta(x, s)) +
           petal_phi(x) * petal_lap_logbeta(x, s);
  };
  p.g = [exact = p.exact, geom = p.geom](Vec2 x) {
    return exact.value(x, geom.value(x) >= 0.0 ? Side::plus : Side::minus);
  };
  return p;
}

Problem make_problem(const std::string& name, double beta_plus,
                     double beta_minus) {
  if (name == "example1") return make_disk_problem(beta_plus, beta_minus);
  if (name == "example2") return make_petal_problem();
  throw Error("unknown problem name: " + name);
}

}  // namespace ppife
