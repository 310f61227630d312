#include "cdasim/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace cdasim {

std::string_view to_string(StepMode m) noexcept {
  switch (m) {
    case StepMode::fixed: return "fixed";
    case StepMode::jittered: return "jittered";
    case StepMode::random: return "random";
  }
  return "?";
}

std::string_view to_string(TimeMode m) noexcept {
  switch (m) {
    case TimeMode::periodic: return "periodic";
    case TimeMode::drip_fixed: return "drip-fixed";
    case TimeMode::drip_jittered: return "drip-jittered";
    case TimeMode::drip_poisson: return "drip-poisson";
  }
  return "?";
}

std::optional<StepMode> parse_step_mode(std::string_view s) noexcept {
  for (auto m : {StepMode::fixed, StepMode::jittered, StepMode::random})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

std::optional<TimeMode> parse_time_mode(std::string_view s) noexcept {
  for (auto m : {TimeMode::periodic, TimeMode::drip_fixed, TimeMode::drip_jittered,
                 TimeMode::drip_poisson})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

Timestep OrderSchedule::duration() const noexcept {
  return supply.empty() ? 0 : supply.back().to;
}

const SubSchedule& OrderSchedule::at(Side side, Timestep t) const {
  const auto& subs = side == Side::bid ? demand : supply;
  for (const auto& s : subs)
    if (t >= s.from && t < s.to) return s;
  throw std::out_of_range("no sub-schedule covers timestep " + std::to_string(t));
}

void OrderSchedule::validate() const {
  if (interval <= 0) throw std::invalid_argument("schedule interval must be positive");
  if (supply.empty()) throw std::invalid_argument("schedule has no sub-schedules");
  if (supply.size() != demand.size())
    throw std::invalid_argument("supply and demand sub-schedule counts differ");
  Timestep expected_from = 0;
  for (std::size_t i = 0; i < supply.size(); ++i) {
    for (const auto* s : {&supply[i], &demand[i]}) {
      const std::string where = "sub-schedule " + std::to_string(i);
      if (s->from != expected_from) throw std::invalid_argument(where + " leaves a gap or overlap");
      if (s->to <= s->from) throw std::invalid_argument(where + " is empty");
      if ((s->to - s->from) % interval != 0)
        throw std::invalid_argument(where + " is not a whole number of intervals");
      if (s->low > s->high) throw std::invalid_argument(where + " has low > high");
      if (!is_valid_price(s->low) || !is_valid_price(s->high))
        throw std::invalid_argument(where + " price range leaves [1, 1000]");
    }
    if (supply[i].to != demand[i].to)
      throw std::invalid_argument("supply and demand boundaries differ at sub-schedule " +
                                  std::to_string(i));
    expected_from = supply[i].to;
  }
}

void SchedulerParams::validate() const {
  if (interval <= 0 || duration <= 0) throw std::invalid_argument("duration and interval must be positive");
  if (duration % interval != 0) throw std::invalid_argument("duration must be a multiple of interval");
  if (max_schedules < 1) throw std::invalid_argument("max_schedules must be at least 1");
  if (max_schedules > num_intervals())
    throw std::invalid_argument("max_schedules exceeds the number of intervals");
  if (max_volatility < 0 || max_change < 0)
    throw std::invalid_argument("volatility and change bounds must be non-negative");
  if (!is_valid_price(midprice)) throw std::invalid_argument("midprice outside [1, 1000]");
}

std::pair<Price, Price> sub_schedule_range(Price midprice, int change, int volatility) noexcept {
  return {clamp_price(static_cast<long long>(midprice) + change - volatility),
          clamp_price(static_cast<long long>(midprice) + change + volatility)};
}

OrderSchedule generate_schedule(const SchedulerParams& params, Rng& rng) {
  params.validate();
  OrderSchedule schedule;
  schedule.interval = params.interval;
  schedule.timemode = static_cast<TimeMode>(std::uniform_int_distribution<int>(0, 3)(rng));

  const int count = std::uniform_int_distribution<int>(1, params.max_schedules)(rng);
  std::vector<int> lengths(static_cast<std::size_t>(count), 1);  // in intervals
  std::uniform_int_distribution<int> pick(0, count - 1);
  for (int i = 0; i < params.num_intervals() - count; ++i) ++lengths[pick(rng)];

  std::uniform_int_distribution<int> volatility(0, params.max_volatility);
  std::uniform_int_distribution<int> change(-params.max_change, params.max_change);
  // drawn in the order fixed, random, jittered
  constexpr StepMode kModes[] = {StepMode::fixed, StepMode::random, StepMode::jittered};
  std::uniform_int_distribution<int> mode(0, 2);

  Timestep from = 0;
  for (int k = 0; k < count; ++k) {
    const Timestep to = from + lengths[k] * params.interval;
    for (auto* side : {&schedule.supply, &schedule.demand}) {
      const int vol = volatility(rng);
      const int shift = change(rng);
      const StepMode step = kModes[mode(rng)];
      const auto [low, high] = sub_schedule_range(params.midprice, shift, vol);
      side->push_back(SubSchedule{from, to, low, high, step});
    }
    from = to;
  }
  return schedule;
}

OrderSchedule symmetric_schedule(Price low, Price high, Timestep duration, Timestep interval) {
  OrderSchedule s;
  s.timemode = TimeMode::periodic;
  s.interval = interval;
  s.supply.push_back(SubSchedule{0, duration, low, high, StepMode::fixed});
  s.demand.push_back(SubSchedule{0, duration, low, high, StepMode::fixed});
  s.validate();
  return s;
}

std::vector<Price> order_prices(const SubSchedule& sub, int n_orders, Side side, Rng& rng) {
  if (n_orders < 1) throw std::invalid_argument("order_prices needs at least one order");
  const double low = sub.low;
  const double high = sub.high;
  const double step = n_orders > 1 ? (high - low) / (n_orders - 1) : 0.0;
  auto even = [&](int i) { return n_orders > 1 ? low + i * step : (low + high) / 2.0; };

  std::vector<Price> prices;
  prices.reserve(static_cast<std::size_t>(n_orders));
  for (int i = 0; i < n_orders; ++i) {
    double p = 0.0;
    switch (sub.stepmode) {
      case StepMode::fixed:
        p = even(i);
        break;
      case StepMode::jittered: {
        const double half = (n_orders > 1 ? step : high - low) / 2.0;
        p = even(i) + std::uniform_real_distribution<double>(-half, half)(rng);
        break;
      }
      case StepMode::random:
        p = std::uniform_int_distribution<Price>(sub.low, sub.high)(rng);
        break;
    }
    prices.push_back(static_cast<Price>(std::clamp<long long>(std::llround(p), sub.low, sub.high)));
  }
  // demand is laid out from the top of the range down
  if (side == Side::bid) std::reverse(prices.begin(), prices.end());
  return prices;
}

std::vector<Timestep> deployment_times(TimeMode mode, Timestep start, Timestep interval,
                                       int n_traders, Rng& rng) {
  if (n_traders < 1) throw std::invalid_argument("deployment_times needs at least one trader");
  const Timestep last = start + interval - 1;
  const double gap = static_cast<double>(interval) / n_traders;
  auto clamp = [&](double t) {
    return static_cast<Timestep>(std::clamp<double>(std::floor(t), start, last));
  };

  std::vector<Timestep> times;
  times.reserve(static_cast<std::size_t>(n_traders));
  switch (mode) {
    case TimeMode::periodic:
      times.assign(static_cast<std::size_t>(n_traders), start);
      break;
    case TimeMode::drip_fixed:
      for (int i = 0; i < n_traders; ++i) times.push_back(clamp(start + i * gap));
      break;
    case TimeMode::drip_jittered: {
      std::uniform_real_distribution<double> jitter(-gap / 2.0, gap / 2.0);
      for (int i = 0; i < n_traders; ++i) times.push_back(clamp(start + i * gap + jitter(rng)));
      break;
    }
    case TimeMode::drip_poisson: {
      std::exponential_distribution<double> wait(1.0 / gap);
      double t = start;
      for (int i = 0; i < n_traders; ++i) {
        times.push_back(clamp(t));
        t += wait(rng);
      }
      break;
    }
  }
  return times;
}

Equilibrium equilibrium(std::span<const Price> supply_prices, std::span<const Price> demand_prices) {
  if (supply_prices.empty() || demand_prices.empty())
    throw std::invalid_argument("equilibrium needs non-empty supply and demand");
  std::vector<Price> supply(supply_prices.begin(), supply_prices.end());
  std::vector<Price> demand(demand_prices.begin(), demand_prices.end());
  std::sort(supply.begin(), supply.end());
  std::sort(demand.begin(), demand.end(), std::greater<>());

  Equilibrium eq;
  const std::size_t n = std::min(supply.size(), demand.size());
  std::size_t q = 0;
  while (q < n && demand[q] >= supply[q]) {
    eq.surplus += demand[q] - supply[q];
    ++q;
  }
  eq.quantity = static_cast<int>(q);
  if (q == 0) return eq;

  Price lower = supply[q - 1];
  Price upper = demand[q - 1];
  if (q < demand.size()) lower = std::max(lower, demand[q]);
  if (q < supply.size()) upper = std::min(upper, supply[q]);
  eq.price_range = std::pair{lower, upper};
  return eq;
}

// ---------------------------------------------------------------- JSON

void to_json(nlohmann::json& j, const SubSchedule& s) {
  j = nlohmann::json{{"from", s.from},
                     {"to", s.to},
                     {"low", s.low},
                     {"high", s.high},
                     {"stepmode", std::string(to_string(s.stepmode))}};
}

void from_json(const nlohmann::json& j, SubSchedule& s) {
  j.at("from").get_to(s.from);
  j.at("to").get_to(s.to);
  j.at("low").get_to(s.low);
  j.at("high").get_to(s.high);
  const auto mode = parse_step_mode(j.at("stepmode").get<std::string>());
  if (!mode) throw std::invalid_argument("unknown stepmode " + j.at("stepmode").dump());
  s.stepmode = *mode;
}

void to_json(nlohmann::json& j, const OrderSchedule& s) {
  j = nlohmann::json{{"timemode", std::string(to_string(s.timemode))},
                     {"interval", s.interval},
                     {"supply", s.supply},
                     {"demand", s.demand}};
}

void from_json(const nlohmann::json& j, OrderSchedule& s) {
  const auto mode = parse_time_mode(j.at("timemode").get<std::string>());
  if (!mode) throw std::invalid_argument("unknown timemode " + j.at("timemode").dump());
  s.timemode = *mode;
  j.at("interval").get_to(s.interval);
  j.at("supply").get_to(s.supply);
  j.at("demand").get_to(s.demand);
}

void to_json(nlohmann::json& j, const SchedulerParams& p) {
  j = nlohmann::json{{"duration", p.duration},           {"interval", p.interval},
                     {"max_schedules", p.max_schedules}, {"midprice", p.midprice},
                     {"max_volatility", p.max_volatility}, {"max_change", p.max_change}};
}

void from_json(const nlohmann::json& j, SchedulerParams& p) {
  p.duration = j.value("duration", p.duration);
  p.interval = j.value("interval", p.interval);
  p.max_schedules = j.value("max_schedules", p.max_schedules);
  p.midprice = j.value("midprice", p.midprice);
  p.max_volatility = j.value("max_volatility", p.max_volatility);
  p.max_change = j.value("max_change", p.max_change);
}

std::string schedule_to_json(const OrderSchedule& schedule) {
  return nlohmann::json(schedule).dump(2) + "\n";
}

OrderSchedule schedule_from_json(const std::string& text) {
  auto schedule = nlohmann::json::parse(text).get<OrderSchedule>();
  schedule.validate();
  return schedule;
}

}  // namespace cdasim
