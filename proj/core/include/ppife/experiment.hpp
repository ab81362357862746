#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ppife/problems.hpp"
#include "ppife/verification.hpp"

namespace ppife {

// Everything one convergence study needs; loadable from a flat key=value
// file, overridable from the command line.
struct RunConfig {
  std::string example = "example1";  // example1 | example2 | custom
  double beta_plus = 1.0;
  double beta_minus = 1.0;
  // custom-example geometry: circular interface of radius r0 at the given
  // center, constant coefficients, radial manufactured solution
  double r0 = 0.5;
  double center_x = 0.0;
  double center_y = 0.0;
  std::vector<int> n_ladder = {8, 16, 32, 64, 128, 256};
  int quad_order_stiffness = 2;
  int quad_order_variable = 4;
  int quad_order_load = 4;
  int quad_order_errors = 6;
  double solver_tol = 1e-12;
  std::string out_dir = ".";
  bool write_fields = true;   // per-level sampled field CSV
  bool with_properties = false;
  bool allow_large_n = false;  // permits ladder levels beyond N=256
  unsigned seed = 20240817;
};

// Parses "key = value" lines; '#' starts a comment, blank lines are skipped,
// unknown keys raise Error. The ladder is a comma-separated int list.
RunConfig load_config(std::istream& is);
RunConfig load_config_file(const std::string& path);

// "8,16,32" -> {8, 16, 32}; raises Error on anything that is not an int list
std::vector<int> parse_ladder(const std::string& s);

// Raises Error unless the example id is known, the coefficients are positive,
// and the ladder is a strictly increasing list of powers of two (levels above
// 256 need allow_large_n and print a runtime warning).
void validate(const RunConfig& cfg);

struct RunOutput {
  std::vector<ErrorReport> reports;
  RateTable rates;
  bool complete = true;      // false when a level failed and stopped the run
  std::string stop_reason;
};

// Builds, solves and measures every ladder level of the configured problem;
// writes rates.csv plus one run_N<k>.csv field sample per level into
// out_dir. A propagated level failure ends the ladder with a partial report.
RunOutput run_experiment(const RunConfig& cfg);

// Runs the full property suite with the config seed and writes
// properties.txt into out_dir.
std::vector<PropertyResult> run_properties(const RunConfig& cfg);

}  // namespace ppife
