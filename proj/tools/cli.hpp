#pragma once
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cdasim/oracle.hpp"
#include "cdasim/schedules.hpp"
#include "cdasim/strategy_params.hpp"

namespace cdasim::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kCellFailures = 2 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed{1};
  SchedulerParams scheduler;
  std::vector<StrategyKind> strategies{StrategyKind::AA, StrategyKind::GDX, StrategyKind::SNPR,
                                       StrategyKind::ZIP};
  StrategyParams params;
  int n_per_side{16};
  std::vector<double> p_grid;  // empty: p_levels evenly spaced values in [0, p_max]
  int p_levels{14};
  int subtrials{1};
  int schedule_count{100};
  // "generated", "simple", or the path of a schedule manifest
  std::string schedules{"generated"};
  Price simple_low{50};
  Price simple_high{150};
  Timestep duration{0};  // session length; 0 uses each schedule's own
  std::vector<StrategyKind> landscape_kinds;  // default: the first three strategies
  int landscape_resolution{10};
  std::map<StrategyKind, SideCounts> population;  // run-session; default: even split
  double failure_threshold{0.0};  // tolerated share of failed cells
  std::filesystem::path output_dir{"out"};
  int jobs{1};
};

// Parses and validates a configuration document. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);
void validate(const RunConfig& config);

std::vector<double> noise_grid(const RunConfig& config);
// Schedules named by the configuration, with their ids.
std::vector<std::pair<int, OrderSchedule>> load_schedules(const RunConfig& config);
OrderSchedule generated_schedule(const RunConfig& config, int id);
ExperimentSettings settings_for(const RunConfig& config);

int cmd_gen_schedules(const RunConfig& config, std::ostream& log);
int cmd_run_session(const RunConfig& config, std::ostream& log);

enum class Experiment { exp1, exp2, landscape };
int cmd_experiment(const RunConfig& config, Experiment which, std::ostream& log);

// Reads a records CSV and writes summary, fit and plot files into out_dir.
int cmd_analyze(const std::filesystem::path& records, const std::filesystem::path& out_dir,
                std::ostream& log);

}  // namespace cdasim::cli
