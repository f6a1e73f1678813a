// Experiment CLI: run single experiments, parameter sweeps, validate
// configs. Exit codes: 0 ok, 1 config error, 2 divergence, 3 partial sweep
// failure.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "decopt/harness.hpp"

using decopt::harness::ConfigError;
using decopt::harness::ExperimentConfig;

int main(int argc, char** argv) {
  CLI::App app{"decentralized optimization experiment harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed_override = 0;
  bool has_seed = false;
  int workers = 1;
  bool quiet = false;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", config_path, "config JSON path");
    if (needs_config) opt->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed_override, "root seed override")
        ->each([&](const std::string&) { has_seed = true; });
    cmd->add_option("--workers", workers, "parallel sweep workers");
    cmd->add_flag("--quiet", quiet, "suppress summary output");
  };

  auto* run_cmd = app.add_subcommand("run", "run one experiment");
  add_common(run_cmd, true);

  auto* sweep_cmd = app.add_subcommand("sweep", "sweep one variable");
  add_common(sweep_cmd, true);
  std::string variable = "eps";
  std::vector<double> values;
  sweep_cmd->add_option("--variable", variable, "eps | chi | kappa")
      ->required();
  sweep_cmd->add_option("--values", values, "swept values")->required();

  auto* list_cmd = app.add_subcommand("list-algorithms", "print algorithm ids");
  (void)list_cmd;

  auto* validate_cmd =
      app.add_subcommand("validate-config", "check a config file");
  add_common(validate_cmd, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list-algorithms")) {
      for (const auto& id : decopt::harness::known_algorithms())
        std::printf("%s\n", id.c_str());
      return 0;
    }

    ExperimentConfig config = ExperimentConfig::from_file(config_path);
    if (has_seed) config.seed = seed_override;

    if (app.got_subcommand("validate-config")) {
      if (!quiet) std::printf("config ok: %s\n", config_path.c_str());
      return 0;
    }

    if (app.got_subcommand("run")) {
      const auto outcome =
          decopt::harness::run_experiment(config, out_dir, quiet);
      if (outcome.exit_code == 2 && !quiet)
        std::fprintf(stderr, "run diverged\n");
      return outcome.exit_code;
    }

    if (app.got_subcommand("sweep")) {
      const auto report = decopt::harness::sweep(config, variable, values,
                                                 workers, out_dir);
      if (!quiet) std::printf("%s\n", report.to_json_text().c_str());
      return report.complete ? 0 : 3;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
