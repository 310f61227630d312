#include "cdasim/session.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cdasim/seed.hpp"

namespace cdasim {

std::vector<TraderSpec> expand(const TraderPopulation& population) {
  std::vector<TraderSpec> specs;
  for (auto side : {Side::bid, Side::ask})
    for (auto k : kAllKinds) {
      const int n = side == Side::bid ? population[k].buyers : population[k].sellers;
      for (int i = 0; i < n; ++i) specs.push_back(TraderSpec{k, side});
    }
  return specs;
}

long SessionResult::total_profit() const noexcept {
  long total = 0;
  for (const auto& t : traders) total += t.balance;
  return total;
}

std::array<std::optional<double>, kKindCount> SessionResult::kind_average() const {
  std::array<long, kKindCount> sum{};
  std::array<int, kKindCount> count{};
  for (const auto& t : traders) {
    sum[index_of(t.kind)] += t.balance;
    ++count[index_of(t.kind)];
  }
  std::array<std::optional<double>, kKindCount> avg;
  for (std::size_t i = 0; i < kKindCount; ++i)
    if (count[i] > 0) avg[i] = static_cast<double>(sum[i]) / count[i];
  return avg;
}

double SessionResult::market_average() const {
  if (traders.empty()) return 0.0;
  return static_cast<double>(total_profit()) / static_cast<double>(traders.size());
}

std::optional<double> SessionResult::efficiency() const {
  if (theoretical_surplus <= 0) return std::nullopt;
  return static_cast<double>(total_profit()) / static_cast<double>(theoretical_surplus);
}

Session::Session(const OrderSchedule& schedule, std::span<const TraderSpec> traders,
                 const SessionConfig& config, std::uint64_t seed)
    : schedule_(schedule),
      config_(config),
      duration_(config.duration > 0 ? config.duration : schedule.duration()),
      rng_(derive_seed({seed, 0})) {
  schedule_.validate();
  if (traders.empty()) throw std::invalid_argument("session needs at least one trader");
  if (duration_ > schedule_.duration())
    throw std::invalid_argument("schedule does not cover the session duration");

  states_.reserve(traders.size());
  strategies_.reserve(traders.size());
  for (std::size_t i = 0; i < traders.size(); ++i) {
    const auto id = static_cast<TraderId>(i);
    TraderState s;
    s.id = id;
    s.kind = traders[i].kind;
    s.side = traders[i].side;
    states_.push_back(std::move(s));
    strategies_.push_back(make_strategy(traders[i].kind, traders[i].side, config_.params,
                                        derive_seed({seed, 1, i})));
    (traders[i].side == Side::bid ? buyers_ : sellers_).push_back(id);
  }
}

void Session::plan_interval(Timestep start) {
  arrivals_.erase(arrivals_.begin(), arrivals_.begin() + static_cast<long>(next_arrival_));
  next_arrival_ = 0;

  std::vector<Price> supply;
  std::vector<Price> demand;
  for (auto side : {Side::ask, Side::bid}) {
    std::vector<TraderId> ids = side == Side::bid ? buyers_ : sellers_;
    if (ids.empty()) continue;
    const int n = static_cast<int>(ids.size());
    auto prices = order_prices(schedule_.at(side, start), n, side, rng_);
    std::shuffle(prices.begin(), prices.end(), rng_);
    std::shuffle(ids.begin(), ids.end(), rng_);
    const auto times = deployment_times(schedule_.timemode, start, schedule_.interval, n, rng_);
    for (int i = 0; i < n; ++i)
      arrivals_.push_back(Arrival{times[i], ids[i], CustomerOrder{side, prices[i], times[i]}});
    (side == Side::bid ? demand : supply) = std::move(prices);
  }
  std::stable_sort(arrivals_.begin(), arrivals_.end(),
                   [](const Arrival& a, const Arrival& b) { return a.time < b.time; });
  if (!supply.empty() && !demand.empty()) theoretical_surplus_ += equilibrium(supply, demand).surplus;
}

void Session::deploy(TraderId trader, const CustomerOrder& order) {
  auto& state = states_.at(static_cast<std::size_t>(trader));
  assign_order(state, order);
  if (auto old = book_.cancel(trader)) {
    if (config_.record_tape) tape_.record_cancel(*old, now_);
  }
  strategies_[static_cast<std::size_t>(trader)]->on_order(order);
}

void Session::broadcast(const MarketEvent& event) {
  if (sink_) sink_->push_back(event);
  for (std::size_t i = 0; i < states_.size(); ++i)
    strategies_[i]->on_market_event(event, states_[i].pending);
}

void Session::settle(const Trade& trade) {
  auto& buyer = states_.at(static_cast<std::size_t>(trade.buyer));
  auto& seller = states_.at(static_cast<std::size_t>(trade.seller));
  if (!buyer.pending || !seller.pending)
    throw std::logic_error("trade involves a trader without a pending order");
  for (auto* s : {&buyer, &seller}) {
    const long surplus = strategy_profit_per_trade(s->pending->limit, trade.price, s->side);
    s->balance += surplus;
    s->blotter.push_back(BlotterEntry{trade.time, trade.price, s->pending->limit, surplus});
    s->pending.reset();
  }
  buyer_payments_ += trade.price;
  seller_receipts_ += trade.price;
  ++trade_count_;
}

SubmitResult Session::submit_quote(TraderId trader, Side side, Price price) {
  const auto& state = states_.at(static_cast<std::size_t>(trader));
  if (!state.pending || state.pending->side != side) {
    SubmitResult rejected;
    rejected.reason = "no pending customer order on that side";
    return rejected;
  }
  if (!within_limit(*state.pending, price)) {
    SubmitResult rejected;
    rejected.reason = "quote would lose money against the customer order";
    return rejected;
  }
  auto result = book_.submit(trader, side, price, now_);
  if (result.status == SubmitStatus::rejected) return result;
  if (result.replaced && config_.record_tape) tape_.record_cancel(*result.replaced, now_);

  if (result.status == SubmitStatus::executed) {
    const Trade& trade = *result.trade;
    settle(trade);
    if (config_.record_tape) tape_.record_trade(trade);
    broadcast(MarketEvent{TapeEventType::trade, now_, trade.standing_side, trade.price,
                          book_.snapshot()});
  } else {
    if (config_.record_tape) tape_.record_quote(*book_.quote_of(trader));
    broadcast(MarketEvent{TapeEventType::quote, now_, side, price, book_.snapshot()});
  }
  return result;
}

std::vector<MarketEvent> Session::step(Timestep t) {
  if (t != now_ || t >= duration_)
    throw std::logic_error("session_step expects timestep " + std::to_string(now_) + ", got " +
                           std::to_string(t));
  std::vector<MarketEvent> events;
  sink_ = &events;

  if (config_.auto_deploy && t % schedule_.interval == 0) plan_interval(t);
  while (next_arrival_ < arrivals_.size() && arrivals_[next_arrival_].time <= t) {
    const auto& a = arrivals_[next_arrival_++];
    deploy(a.trader, a.order);
  }

  std::vector<TraderId> poll;
  for (const auto& s : states_)
    if (s.pending) poll.push_back(s.id);
  std::shuffle(poll.begin(), poll.end(), rng_);

  for (TraderId id : poll) {
    auto& state = states_[static_cast<std::size_t>(id)];
    if (!state.pending) continue;  // traded earlier this step
    ++state.polls;
    const QuoteContext ctx{*state.pending, book_.snapshot(), t, duration_};
    const auto price = strategies_[static_cast<std::size_t>(id)]->get_quote(ctx);
    if (!price) continue;
    if (!within_limit(*state.pending, *price))
      throw std::logic_error(std::string(to_string(state.kind)) + " trader " + std::to_string(id) +
                             " quoted " + std::to_string(*price) + " beyond its limit " +
                             std::to_string(state.pending->limit));
    ++state.quotes;
    submit_quote(id, state.pending->side, *price);
  }

  sink_ = nullptr;
  ++now_;
  return events;
}

void Session::run() {
  while (!done()) step(now_);
}

SessionResult Session::result() const {
  SessionResult r;
  r.traders.reserve(states_.size());
  for (const auto& s : states_)
    r.traders.push_back(TraderOutcome{s.id, s.kind, s.side, s.balance,
                                      static_cast<int>(s.blotter.size()), s.polls, s.quotes});
  r.trade_count = trade_count_;
  r.buyer_payments = buyer_payments_;
  r.seller_receipts = seller_receipts_;
  r.theoretical_surplus = theoretical_surplus_;
  if (config_.record_tape) r.tape = tape_;
  return r;
}

SessionResult run_session(const OrderSchedule& schedule, std::span<const TraderSpec> traders,
                          const SessionConfig& config, std::uint64_t seed) {
  Session session(schedule, traders, config, seed);
  session.run();
  return session.result();
}

SessionResult run_session(const OrderSchedule& schedule, const TraderPopulation& population,
                          const SessionConfig& config, std::uint64_t seed) {
  const auto specs = expand(population);
  return run_session(schedule, specs, config, seed);
}

}  // namespace cdasim
