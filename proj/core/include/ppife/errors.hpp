#pragma once

#include <stdexcept>
#include <string>

namespace ppife {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Root search requested on an edge whose endpoint values do not bracket zero.
struct NoBracket : Error {
  NoBracket() : Error("no sign change on edge, cannot bracket a root") {}
};

// Element geometry incompatible with a single straight cut (0, 1 or 3 crossed
// edges, or an edge crossed more than once).
struct AssumptionAViolated : Error {
  int element = -1;
  int suggested_n = 0;
  AssumptionAViolated(int elem, int suggest, const std::string& what)
      : Error("interface resolution assumption violated on element " +
              std::to_string(elem) + ": " + what +
              " (suggest refining to N >= " + std::to_string(suggest) + ")"),
        element(elem),
        suggested_n(suggest) {}
};

// The shape-function correction denominator is numerically zero; only possible
// when the maximum-angle condition fails.
struct SingularBasis : Error {
  double denominator = 0.0;
  explicit SingularBasis(double den)
      : Error("singular shape-function system, denominator = " +
              std::to_string(den)),
        denominator(den) {}
};

// A cut leaves one side with negligible area.
struct DegenerateCut : Error {
  DegenerateCut() : Error("cut produces a degenerate sub-region") {}
};

struct NotInterfaceEdge : Error {
  NotInterfaceEdge() : Error("edge is not an interface edge") {}
};

struct NotConverged : Error {
  int iterations = 0;
  double residual = 0.0;
  NotConverged(int iters, double res)
      : Error("linear solver did not converge: " + std::to_string(iters) +
              " iterations, residual " + std::to_string(res)),
        iterations(iters),
        residual(res) {}
};

struct OutOfDomain : Error {
  OutOfDomain() : Error("point lies outside the mesh domain") {}
};

struct InsufficientData : Error {
  explicit InsufficientData(const std::string& what) : Error(what) {}
};

}  // namespace ppife
