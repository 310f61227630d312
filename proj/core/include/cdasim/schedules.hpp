#pragma once
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cdasim/types.hpp"

namespace cdasim {

enum class StepMode : std::uint8_t { fixed, jittered, random };
enum class TimeMode : std::uint8_t { periodic, drip_fixed, drip_jittered, drip_poisson };

std::string_view to_string(StepMode m) noexcept;
std::string_view to_string(TimeMode m) noexcept;
std::optional<StepMode> parse_step_mode(std::string_view s) noexcept;
std::optional<TimeMode> parse_time_mode(std::string_view s) noexcept;

struct SubSchedule {
  Timestep from{0};  // inclusive
  Timestep to{0};    // exclusive
  Price low{kMinPrice};
  Price high{kMinPrice};
  StepMode stepmode{StepMode::fixed};

  friend bool operator==(const SubSchedule&, const SubSchedule&) = default;
};

// Supply and demand sub-schedules share their boundaries and together tile
// [0, duration) in whole intervals.
struct OrderSchedule {
  TimeMode timemode{TimeMode::periodic};
  Timestep interval{30};
  std::vector<SubSchedule> supply;
  std::vector<SubSchedule> demand;

  [[nodiscard]] Timestep duration() const noexcept;
  // Sub-schedule covering timestep t on the given side (bid = demand).
  [[nodiscard]] const SubSchedule& at(Side side, Timestep t) const;
  // Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

  friend bool operator==(const OrderSchedule&, const OrderSchedule&) = default;
};

struct SchedulerParams {
  Timestep duration{240};
  Timestep interval{30};
  int max_schedules{8};
  Price midprice{100};
  int max_volatility{60};
  int max_change{40};

  [[nodiscard]] int num_intervals() const noexcept { return duration / interval; }
  void validate() const;

  friend bool operator==(const SchedulerParams&, const SchedulerParams&) = default;
};

// Price bounds of one sub-schedule side: midprice + change -/+ volatility,
// clamped to the price domain.
std::pair<Price, Price> sub_schedule_range(Price midprice, int change, int volatility) noexcept;

// Random order schedule: time mode, sub-schedule count and durations, then a
// price range and step mode per sub-schedule and side.
OrderSchedule generate_schedule(const SchedulerParams& params, Rng& rng);

// One sub-schedule with identical supply and demand ranges, even price steps
// and periodic replenishment.
OrderSchedule symmetric_schedule(Price low, Price high, Timestep duration, Timestep interval);

// Limit prices for n orders laid out over the sub-schedule's range.
std::vector<Price> order_prices(const SubSchedule& sub, int n_orders, Side side, Rng& rng);

// Arrival timestep of each of n orders inside [start, start + interval).
std::vector<Timestep> deployment_times(TimeMode mode, Timestep start, Timestep interval,
                                       int n_traders, Rng& rng);

struct Equilibrium {
  int quantity{0};
  std::optional<std::pair<Price, Price>> price_range;  // empty when quantity == 0
  long surplus{0};  // maximum total surplus: sum over traded units of demand - supply
};

// Competitive equilibrium of unit step supply and demand curves.
Equilibrium equilibrium(std::span<const Price> supply_prices, std::span<const Price> demand_prices);

void to_json(nlohmann::json& j, const SubSchedule& s);
void from_json(const nlohmann::json& j, SubSchedule& s);
void to_json(nlohmann::json& j, const OrderSchedule& s);
void from_json(const nlohmann::json& j, OrderSchedule& s);
void to_json(nlohmann::json& j, const SchedulerParams& p);
void from_json(const nlohmann::json& j, SchedulerParams& p);

std::string schedule_to_json(const OrderSchedule& schedule);
OrderSchedule schedule_from_json(const std::string& text);

}  // namespace cdasim
