#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include <nlohmann/json.hpp>

#include "cli.hpp"

using namespace cdasim::cli;

int main(int argc, char** argv) {
  CLI::App app{"Continuous double auction simulator and oracle experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "output directory (overrides the config)");

  auto* gen = app.add_subcommand("gen-schedules", "write random order schedules and a manifest");
  auto* session = app.add_subcommand("run-session", "run one market session and write its tape");
  auto* exp1 = app.add_subcommand("experiment1", "perfect-oracle experiment");
  auto* exp2 = app.add_subcommand("experiment2", "noisy-oracle experiment");
  auto* land = app.add_subcommand("landscape", "dominance landscape over a three-kind simplex");
  auto* analyze = app.add_subcommand("analyze", "summarize an existing records file");
  std::string records;
  analyze->add_option("records", records, "records CSV")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig config = config_path.empty() ? parse_config(nlohmann::json::object())
                                           : load_config(config_path);
    if (seed) config.seed = *seed;
    if (jobs) config.jobs = *jobs;
    if (out) config.output_dir = *out;
    validate(config);

    if (*gen) return cmd_gen_schedules(config, std::cerr);
    if (*session) return cmd_run_session(config, std::cerr);
    if (*exp1) return cmd_experiment(config, Experiment::exp1, std::cerr);
    if (*exp2) return cmd_experiment(config, Experiment::exp2, std::cerr);
    if (*land) return cmd_experiment(config, Experiment::landscape, std::cerr);
    if (*analyze) return cmd_analyze(records, config.output_dir / "analysis", std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCellFailures;
  }
  return kOk;
}
