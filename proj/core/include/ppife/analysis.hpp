#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "ppife/assembly.hpp"

namespace ppife {

// Exact solution with one branch per true interface side.
struct TwoSidedSolution {
  std::function<double(Vec2, Side)> value;
  std::function<Vec2(Vec2, Side)> gradient;
};

struct ErrorReport {
  int N = 0;
  double h = 0.0;
  double l2_error = 0.0;
  double h1_error = 0.0;  // coefficient-weighted broken gradient norm
  // squared triple-norm components beyond the gradient term
  double edge_avg_sq = 0.0;
  double edge_jump_sq = 0.0;
  double sh_sq = 0.0;
  double triple_norm() const;
};

// Element-wise cut quadrature; the exact solution's branch follows each
// sub-element's tag, so on the thin region between the true interface and
// the per-element chord the matching smooth extension is compared against
// the discrete piece defined there.  This keeps the weighted gradient error
// free of the inter-branch jump and makes the reported numbers comparable
// across coefficient contrasts.
ErrorReport compute_errors(const DiscreteSolution& sol,
                           const TwoSidedSolution& exact,
                           const Coefficients& beta, int quad_order = 6);

struct RateRow {
  int N = 0;
  double h = 0.0;
  double l2_error = 0.0, h1_error = 0.0;
  std::optional<double> l2_rate, h1_rate;
};

struct RateTable {
  std::vector<RateRow> rows;
  // least-squares slopes of log2(error) against log2(h), finest three levels
  double l2_slope = 0.0;
  double h1_slope = 0.0;
};

RateTable fit_rates(const std::vector<ErrorReport>& reports);

void write_rates_csv(const RateTable& table, std::ostream& os);

// Mesh-dependent norms of a nodal coefficient vector (no boundary handling):
// vol = v'Kv, sh = v'Sv, and the interface-edge average/jump terms by trace
// quadrature.
struct NormBreakdown {
  double vol_sq = 0.0;
  double edge_avg_sq = 0.0;
  double edge_jump_sq = 0.0;
  double sh_sq = 0.0;
  double norm_h_sq() const { return vol_sq; }
  double triple_sq() const {
    return vol_sq + edge_avg_sq + edge_jump_sq + sh_sq;
  }
};

NormBreakdown discrete_norms(const Eigen::VectorXd& v, const LinearSystem& sys,
                             const TriMesh& mesh,
                             const MeshClassification& cls,
                             const BasisCache& bases,
                             const Coefficients& beta);

}  // namespace ppife
