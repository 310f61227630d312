#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cdasim/exchange.hpp"
#include "cdasim/population.hpp"
#include "cdasim/schedules.hpp"
#include "cdasim/strategy.hpp"

namespace cdasim {

struct SessionConfig {
  Timestep duration{0};  // 0: the schedule's own duration
  StrategyParams params;
  bool record_tape{false};
  bool auto_deploy{true};  // false: customer orders only arrive through Session::deploy
};

struct TraderSpec {
  StrategyKind kind{StrategyKind::ZIC};
  Side side{Side::bid};
};

// Buyers first, then sellers; kinds in canonical order within each side.
std::vector<TraderSpec> expand(const TraderPopulation& population);

struct TraderOutcome {
  TraderId id{0};
  StrategyKind kind{StrategyKind::ZIC};
  Side side{Side::bid};
  long balance{0};
  int trades{0};
  int polls{0};
  int quotes{0};

  friend bool operator==(const TraderOutcome&, const TraderOutcome&) = default;
};

struct SessionResult {
  std::vector<TraderOutcome> traders;
  std::size_t trade_count{0};
  long buyer_payments{0};
  long seller_receipts{0};
  long theoretical_surplus{0};  // sum of per-interval equilibrium surpluses
  std::optional<Tape> tape;

  [[nodiscard]] bool zero_trade() const noexcept { return trade_count == 0; }
  [[nodiscard]] long total_profit() const noexcept;
  // Mean balance per trader of each kind, buyers and sellers pooled.
  [[nodiscard]] std::array<std::optional<double>, kKindCount> kind_average() const;
  [[nodiscard]] double market_average() const;
  // Realized over theoretical surplus; nothing when no surplus was available.
  [[nodiscard]] std::optional<double> efficiency() const;

  friend bool operator==(const SessionResult&, const SessionResult&) = default;
};

// One market session: a single-threaded state machine over timesteps.
class Session {
 public:
  Session(const OrderSchedule& schedule, std::span<const TraderSpec> traders,
          const SessionConfig& config, std::uint64_t seed);

  // Advances one timestep: deploy due customer orders, poll every trader with
  // a pending order once in random order, broadcast each book event to all
  // traders. Returns the events of the step. t must be the next timestep.
  std::vector<MarketEvent> step(Timestep t);
  void run();

  [[nodiscard]] Timestep now() const noexcept { return now_; }
  [[nodiscard]] Timestep duration() const noexcept { return duration_; }
  [[nodiscard]] bool done() const noexcept { return now_ >= duration_; }
  [[nodiscard]] const LimitOrderBook& book() const noexcept { return book_; }
  [[nodiscard]] std::span<const TraderState> traders() const noexcept { return states_; }
  [[nodiscard]] SessionResult result() const;

  // Hands a customer order to a trader, cancelling its live quote.
  void deploy(TraderId trader, const CustomerOrder& order);
  // Puts a quote on the book for a trader; rejected unless the trader holds
  // a pending order on that side. Settles and broadcasts any trade.
  SubmitResult submit_quote(TraderId trader, Side side, Price price);

 private:
  struct Arrival {
    Timestep time;
    TraderId trader;
    CustomerOrder order;
  };

  void plan_interval(Timestep start);
  void broadcast(const MarketEvent& event);
  void settle(const Trade& trade);

  OrderSchedule schedule_;
  SessionConfig config_;
  Timestep duration_;
  Timestep now_{0};
  Rng rng_;
  LimitOrderBook book_;
  Tape tape_;
  std::vector<TraderState> states_;
  std::vector<std::unique_ptr<Strategy>> strategies_;
  std::vector<TraderId> buyers_;
  std::vector<TraderId> sellers_;
  std::vector<Arrival> arrivals_;
  std::size_t next_arrival_{0};
  std::vector<MarketEvent>* sink_{nullptr};
  std::size_t trade_count_{0};
  long buyer_payments_{0};
  long seller_receipts_{0};
  long theoretical_surplus_{0};
};

// Runs a whole session. A deterministic function of its arguments.
SessionResult run_session(const OrderSchedule& schedule, std::span<const TraderSpec> traders,
                          const SessionConfig& config, std::uint64_t seed);
SessionResult run_session(const OrderSchedule& schedule, const TraderPopulation& population,
                          const SessionConfig& config, std::uint64_t seed);

}  // namespace cdasim
