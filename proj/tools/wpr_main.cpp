// Command-line front end: solve / compare-fd / diagnose / sweep.
// Exit codes: 0 success, 1 numeric failure (or failed gated diagnostic),
// 2 config or usage error.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wpr/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "weighted-particle solver for stochastic reaction-diffusion "
      "problems with absorbing boundaries"};
  app.require_subcommand(1);

  std::string config_path;
  wpr::RunOptions options;
  std::string sweep_key;
  std::vector<std::string> sweep_values;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "experiment config file")
        ->required();
    cmd->add_option("--workers", options.workers,
                    "worker threads (0 = auto; WPR_WORKERS overrides auto)");
    cmd->add_flag("--quiet", options.quiet, "suppress the stdout summary");
  };

  CLI::App* cmd_solve = app.add_subcommand(
      "solve", "run the fixed-point solver and write artifacts");
  add_common(cmd_solve);
  cmd_solve->add_flag("--dump-noise", options.dump_noise,
                      "also write the common-noise realization (noise.bin)");
  cmd_solve->add_option("--dump-paths", options.dump_paths,
                        "write the first n particle paths (paths.csv)");

  CLI::App* cmd_compare = app.add_subcommand(
      "compare-fd",
      "solve, then compare against the finite-difference reference driven "
      "by the same noise");
  add_common(cmd_compare);

  CLI::App* cmd_diagnose = app.add_subcommand(
      "diagnose",
      "solve, then run the diagnostic battery (exit 1 when a gated check "
      "fails)");
  add_common(cmd_diagnose);

  CLI::App* cmd_sweep = app.add_subcommand(
      "sweep", "repeat solve over a list of values for one config key");
  add_common(cmd_sweep);
  cmd_sweep->add_option("--key", sweep_key, "dotted config key to vary")
      ->required();
  cmd_sweep
      ->add_option("--values", sweep_values,
                   "comma-separated list of values for the key")
      ->required()
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad usage is a config-level error
  }

  try {
    const wpr::ExperimentConfig config =
        wpr::ExperimentConfig::parse_file(config_path);
    if (cmd_solve->parsed()) {
      wpr::run_solve(config, options);
    } else if (cmd_compare->parsed()) {
      wpr::run_compare_fd(config, options);
    } else if (cmd_diagnose->parsed()) {
      const wpr::DiagnosticsReport report = wpr::run_diagnose(config, options);
      if (!report.all_passed()) return 1;
    } else if (cmd_sweep->parsed()) {
      wpr::run_sweep(config, sweep_key, sweep_values, options);
    }
  } catch (const wpr::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
