#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lfdr/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Online resource-allocation simulator: sequential accept/reject decisions "
               "under a replenishable budget, with hindsight benchmarks"};
  app.require_subcommand(1);

  lfdr::RunOptions run_options;
  std::uint64_t seed_override = 0;
  int threads_override = 0;
  CLI::App* run = app.add_subcommand("run", "Run an experiment config and write results");
  run->add_option("config", run_options.config_path, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("-o,--csv", run_options.csv_path, "Write results CSV here (default: stdout)");
  run->add_option("--svg", run_options.svg_path, "Also write a regret-vs-horizon SVG chart");
  CLI::Option* seed_opt =
      run->add_option("--seed", seed_override, "Override the config's master seed");
  CLI::Option* threads_opt = run->add_option(
      "--threads", threads_override, "Worker threads (0 = hardware concurrency)");

  lfdr::ValidateOptions validate_options;
  CLI::App* validate = app.add_subcommand(
      "validate", "Cross-check the hindsight oracle against exhaustive enumeration");
  validate->add_option("--instances", validate_options.instances, "Random instances per check")
      ->check(CLI::PositiveNumber);
  validate->add_option("--max-t", validate_options.max_horizon,
                       "Largest horizon (enumeration cap: 20)");
  validate->add_option("--seed", validate_options.seed, "Master seed for instance generation");

  lfdr::SlopeOptions slope_options;
  CLI::App* slope =
      app.add_subcommand("slope", "Fit the log-log growth rate of one regret series");
  slope->add_option("csv", slope_options.csv_path, "Results CSV produced by `run`")
      ->required()
      ->check(CLI::ExistingFile);
  slope->add_option("--policy", slope_options.policy, "Policy column value")->required();
  slope->add_option("--benchmark", slope_options.benchmark, "Benchmark column value")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    if (*seed_opt) run_options.seed_override = seed_override;
    if (*threads_opt) run_options.threads_override = threads_override;
    return lfdr::cmd_run(run_options, std::cout, std::cerr);
  }
  if (validate->parsed()) return lfdr::cmd_validate(validate_options, std::cout, std::cerr);
  return lfdr::cmd_slope(slope_options, std::cout, std::cerr);
}
