#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ppife/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"parameter-free immersed finite element experiment runner"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a configured refinement study");
  std::string config_path, example, out_dir, ladder;
  double beta_plus = 0.0, beta_minus = 0.0;
  bool verify = false;
  run->add_option("--config", config_path, "flat key=value config file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* ex_opt =
      run->add_option("--example", example, "example1, example2 or custom");
  auto* bp_opt =
      run->add_option("--beta-plus", beta_plus, "outer-side coefficient");
  auto* bm_opt =
      run->add_option("--beta-minus", beta_minus, "inner-side coefficient");
  auto* nl_opt = run->add_option("--n-ladder", ladder,
                                 "refinement levels, e.g. 8,16,32,64");
  auto* out_opt = run->add_option("--out", out_dir, "output directory");
  run->add_flag("--verify", verify, "also run the property suites");

  CLI11_PARSE(app, argc, argv);

  try {
    ppife::RunConfig cfg = ppife::load_config_file(config_path);
    if (ex_opt->count() > 0) cfg.example = example;
    if (bp_opt->count() > 0) cfg.beta_plus = beta_plus;
    if (bm_opt->count() > 0) cfg.beta_minus = beta_minus;
    if (nl_opt->count() > 0) cfg.n_ladder = ppife::parse_ladder(ladder);
    if (out_opt->count() > 0) cfg.out_dir = out_dir;
    if (verify) cfg.with_properties = true;

    const ppife::RunOutput out = ppife::run_experiment(cfg);
    ppife::write_rates_csv(out.rates, std::cout);
    int rc = 0;
    if (!out.complete) {
      std::cerr << "ladder stopped early: " << out.stop_reason << "\n";
      rc = 3;
    }
    if (cfg.with_properties) {
      const auto results = ppife::run_properties(cfg);
      ppife::write_property_report(results, std::cout);
      for (const auto& r : results)
        if (!r.pass && rc == 0) rc = 4;
    }
    return rc;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
