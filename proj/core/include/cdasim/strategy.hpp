#pragma once
#include <memory>
#include <optional>
#include <vector>

#include "cdasim/exchange.hpp"
#include "cdasim/strategy_params.hpp"
#include "cdasim/types.hpp"

namespace cdasim {

struct QuoteContext {
  CustomerOrder order;
  BookSnapshot book;
  Timestep now{0};
  Timestep duration{1};
};

// A trading algorithm. Each instance belongs to one trader in one session and
// owns its own random stream, so its quote sequence depends only on its seed
// and the events it has seen.
class Strategy {
 public:
  virtual ~Strategy() = default;

  [[nodiscard]] virtual StrategyKind kind() const noexcept = 0;

  // Called when a new customer order replaces the pending one.
  virtual void on_order(const CustomerOrder& /*order*/) {}

  // Returns the quote price, or nothing to decline this poll. A returned price
  // must never be loss-making against ctx.order.limit.
  virtual std::optional<Price> get_quote(const QuoteContext& ctx) = 0;

  // Called for every book event. pending is the trader's current order.
  virtual void on_market_event(const MarketEvent& event,
                               const std::optional<CustomerOrder>& pending) = 0;
};

std::unique_ptr<Strategy> make_strategy(StrategyKind kind, Side side, const StrategyParams& params,
                                        std::uint64_t seed);

struct BlotterEntry {
  Timestep time{0};
  Price price{kMinPrice};
  Price limit{kMinPrice};
  long surplus{0};
};

struct TraderState {
  TraderId id{0};
  StrategyKind kind{StrategyKind::ZIC};
  Side side{Side::bid};
  std::optional<CustomerOrder> pending;
  long balance{0};
  std::vector<BlotterEntry> blotter;
  int polls{0};
  int quotes{0};
};

// Replaces the pending order; an unfilled prior order is dropped. Throws
// std::logic_error if the order is for the other side.
void assign_order(TraderState& trader, const CustomerOrder& order);

// Surplus of one unit: limit - price for a buyer, price - limit for a seller.
// Throws std::logic_error when the trade would lose money.
long strategy_profit_per_trade(Price limit, Price exec_price, Side side);

// True if price respects the no-loss constraint for the given order.
constexpr bool within_limit(const CustomerOrder& order, Price price) noexcept {
  return order.side == Side::bid ? price <= order.limit : price >= order.limit;
}

}  // namespace cdasim
