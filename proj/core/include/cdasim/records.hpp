#pragma once
#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdasim/population.hpp"
#include "cdasim/types.hpp"

namespace cdasim {

using KindAverages = std::array<std::optional<double>, kKindCount>;

// One (schedule, population, noise level) cell of an oracle experiment.
struct ExperimentRecord {
  int schedule_id{0};
  int population_index{0};
  TraderPopulation population;  // true population, before the injected pair
  TraderPopulation observed;    // what the oracle reported (equal to population at p = 0)
  double p{0.0};
  int p_index{0};
  StrategyKind predicted{StrategyKind::AA};
  KindAverages prediction_average;  // pooled over the prediction subtrials
  KindAverages real_average;        // pooled over the real subtrials
  double market_average{0.0};       // real phase, all traders
  double multiplier{0.0};           // real_average[predicted] / market_average
  bool correct{false};              // predicted kind earned the highest real average
  bool zero_trade{false};           // real phase produced no trades; multiplier undefined
  int subtrials{1};
  std::uint64_t seed{0};

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

// Records CSV. Columns:
//   schedule_id,population,p,predicted_kind,
//   real_avg_<KIND>... ,pred_avg_<KIND>... (one per kind of the strategy set),
//   market_avg,multiplier,correct,K,seed,population_index,p_index,observed,status
// status is "ok" or "zero_trade"; undefined numbers are written as "nan",
// averages of absent kinds as empty fields.
std::vector<std::string> record_columns(std::span<const StrategyKind> strategy_set);
void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records,
                       std::span<const StrategyKind> strategy_set);

struct RecordTable {
  std::vector<StrategyKind> strategy_set;
  std::vector<ExperimentRecord> records;
};

// Parses a records CSV. Throws std::invalid_argument naming missing or
// unexpected columns when the header does not match the schema.
RecordTable read_records_csv(std::istream& in);

// Sort key used for every written artifact.
bool record_order(const ExperimentRecord& a, const ExperimentRecord& b) noexcept;

std::string format_double(double v, int precision = 6);

}  // namespace cdasim
