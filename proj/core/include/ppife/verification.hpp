#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ppife/problems.hpp"

namespace ppife {

// Outcome of one property suite. margin is the measured extreme value whose
// meaning is stated in detail (residual, ratio, ...).
struct PropertyResult {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  std::string detail;
};

struct VerifyConfig {
  unsigned seed = 20240817;
  int n_cuts = 1000;     // random cut configurations for local suites
  int n_vectors = 1000;  // random coefficient vectors per mesh configuration
  int n_duality = 100;   // random configurations for the lifting identity
  std::vector<int> mesh_ns = {8, 16, 32, 64};
  // refinement ladder for the per-edge/per-element scaling witnesses; starts
  // finer than mesh_ns so the interface population is large enough for its
  // mean to be representative at the coarsest level
  std::vector<int> witness_ns = {32, 64, 128, 256};
  std::vector<double> betas = {2.0, 10.0, 1000.0, 100000.0};
  bool with_3d = true;
};

// --- local (single element / edge patch) suites ---

// closed-form cut basis against a dense solve of the 6 defining constraints
PropertyResult check_basis_oracle_2d(unsigned seed, int n_cuts);
// closed-form cut basis on tetrahedra against the dense 8-constraint solve
PropertyResult check_basis_oracle_3d(unsigned seed, int n_cuts);
// Kronecker property, partition of unity, continuity and flux matching
PropertyResult check_basis_invariants(unsigned seed, int n_cuts);
// correction denominator within its guaranteed bounds on right triangles
PropertyResult check_denominator_bounds(unsigned seed, int n_cuts);
// the obtuse configuration whose correction denominator vanishes
PropertyResult check_singular_configuration();
// jump signatures of the three auxiliary functions
PropertyResult check_auxiliary_signatures(unsigned seed, int n_cuts);
// exact reconstruction of vertex-vanishing affine pairs from jump data
PropertyResult check_decomposition_2d(unsigned seed, int n_cuts);
PropertyResult check_decomposition_3d(unsigned seed, int n_cuts);
// defining volume/edge identity of the lifted jump field
PropertyResult check_lifting_duality(unsigned seed, int n_cuts, bool variable);
// 3D auxiliary norm scaling on shrinking similar tetrahedra
PropertyResult check_aux_scaling_3d(unsigned seed);
// 3D basis unchanged under rotation of the in-plane frame
PropertyResult check_frame_invariance_3d(unsigned seed, int n_cuts);

// --- mesh-level suites (circular interface) ---

// bilinear form bounded below by half the broken energy norm
PropertyResult check_coercivity(const VerifyConfig& cfg);
// matching coefficients reduce the scheme to plain linear elements
PropertyResult check_p1_reduction(int n, double beta);
// the stabilization form annihilates globally continuous functions
PropertyResult check_sh_vanishes_for_continuous(int n, double beta_plus,
                                                double beta_minus);
// triple-norm to energy-norm ratio bounded across refinements
PropertyResult check_norm_equivalence(const VerifyConfig& cfg,
                                      double beta_plus, double beta_minus);
// sharp per-edge constant of the lifted-field norm bound, across
// refinements; the constant is computed exactly from the two sub-segment
// moments the lift depends on
PropertyResult check_lifting_stability(const VerifyConfig& cfg,
                                       double beta_plus, double beta_minus);
// sharp per-edge constant of the jump-versus-gradient-energy bound on the
// two-element patch, across refinements
PropertyResult check_jump_ratio(const VerifyConfig& cfg, double beta_plus,
                                double beta_minus);
// auxiliary-function norm scaling across mesh refinements
PropertyResult check_aux_scaling_2d(const VerifyConfig& cfg, double beta_plus,
                                    double beta_minus);
// solved system satisfies every basis test equation to solver accuracy
PropertyResult check_galerkin_orthogonality(int n, double beta_plus,
                                            double beta_minus);
// nodal interpolation errors contract at the expected slopes without a solve
PropertyResult check_interpolation_rates(double beta_plus, double beta_minus,
                                         const std::vector<int>& ns);

std::vector<PropertyResult> run_all_properties(const VerifyConfig& cfg);

// one line per property: PASS/FAIL, name, margin, detail
void write_property_report(const std::vector<PropertyResult>& results,
                           std::ostream& os);

}  // namespace ppife
