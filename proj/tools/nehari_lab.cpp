// nehari_lab: runs one experiment scenario from a JSON config.
//
//   nehari_lab run configs/ground_small_nu.json --override params.nu=1e-3 --out results/gs
//
// Exit status: 0 PASS, 2 FAIL, 1 error.
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nehari/errors.hpp"
#include "nehari/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Radial experiments for coupled critical Hardy systems"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "execute the scenario described by a config file");
  std::string config;
  std::vector<std::string> overrides;
  std::string out_dir;
  run->add_option("config", config, "JSON config file")->required();
  run->add_option("--override", overrides, "dotted key=value applied to the config before parsing");
  run->add_option("--out", out_dir, "output directory (default: output_dir in the config)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    nehari::ExperimentConfig cfg = nehari::load_config(config, overrides);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    const nehari::ExperimentOutcome outcome = nehari::run_experiment(cfg);
    nehari::write_outputs(cfg.output_dir, cfg, outcome);
    std::printf("%s %s: %s\n", outcome.pass ? "PASS" : "FAIL", nehari::to_string(cfg.scenario).c_str(),
                outcome.verdict.c_str());
    return outcome.pass ? 0 : 2;
  } catch (const nehari::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
  }
  return 1;
}
