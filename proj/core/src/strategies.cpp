#include "cdasim/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cdasim {

void assign_order(TraderState& trader, const CustomerOrder& order) {
  if (order.side != trader.side)
    throw std::logic_error("order for the " + std::string(to_string(order.side)) +
                           " side assigned to a " + std::string(to_string(trader.side)) +
                           " trader " + std::to_string(trader.id));
  trader.pending = order;
}

long strategy_profit_per_trade(Price limit, Price exec_price, Side side) {
  const long surplus = side == Side::bid ? long{limit} - exec_price : long{exec_price} - limit;
  if (surplus < 0)
    throw std::logic_error("loss-making trade: limit " + std::to_string(limit) + ", price " +
                           std::to_string(exec_price));
  return surplus;
}

std::unique_ptr<Strategy> make_strategy(StrategyKind kind, Side side, const StrategyParams& params,
                                        std::uint64_t seed) {
  switch (kind) {
    case StrategyKind::ZIC: return std::make_unique<ZicStrategy>(params.zic, seed);
    case StrategyKind::ZIP: return std::make_unique<ZipStrategy>(side, params.zip, seed);
    case StrategyKind::SNPR: return std::make_unique<SniperStrategy>(params.snpr);
    case StrategyKind::GDX: return std::make_unique<GdxStrategy>(side, params.gdx);
    case StrategyKind::AA: return std::make_unique<AaStrategy>(side, params.aa, seed);
  }
  throw std::invalid_argument("unknown strategy kind");
}

// ---------------------------------------------------------------- ZIC

std::optional<Price> ZicStrategy::get_quote(const QuoteContext& ctx) {
  const Price limit = ctx.order.limit;
  if (ctx.order.side == Side::bid) {
    const Price lo = std::min(params_.floor, limit);
    return std::uniform_int_distribution<Price>(lo, limit)(rng_);
  }
  const Price hi = std::max(params_.ceiling, limit);
  return std::uniform_int_distribution<Price>(limit, hi)(rng_);
}

// ---------------------------------------------------------------- ZIP

ZipStrategy::ZipStrategy(Side side, const ZipParams& params, std::uint64_t seed)
    : side_(side), params_(params), rng_(seed) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  beta_ = params_.beta_min + (params_.beta_max - params_.beta_min) * unit(rng_);
  momentum_ = params_.momentum_max * unit(rng_);
  const double m = params_.margin_min + (params_.margin_max - params_.margin_min) * unit(rng_);
  margin_ = side == Side::bid ? -m : m;
}

ZipStrategy::ZipStrategy(Side side, double margin, double beta, double momentum,
                         const ZipParams& params, std::uint64_t seed)
    : side_(side), params_(params), rng_(seed), margin_(margin), beta_(beta), momentum_(momentum) {}

Price ZipStrategy::quote_for(Price limit, double margin) noexcept {
  const long long raw = std::llround(limit * (1.0 + margin));
  // never cross the limit because of rounding
  return clamp_price(margin <= 0.0 ? std::min<long long>(raw, limit)
                                   : std::max<long long>(raw, limit));
}

std::optional<double> ZipStrategy::shout_price() const {
  if (!limit_) return std::nullopt;
  return *limit_ * (1.0 + margin_);
}

void ZipStrategy::on_order(const CustomerOrder& order) { limit_ = order.limit; }

std::optional<Price> ZipStrategy::get_quote(const QuoteContext& ctx) {
  limit_ = ctx.order.limit;
  active_ = true;
  return quote_for(ctx.order.limit, margin_);
}

double ZipStrategy::target_up(double price) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double rel = price * (1.0 + params_.cr * unit(rng_));
  const double abs = params_.ca * unit(rng_);
  return rel + abs;
}

double ZipStrategy::target_down(double price) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double rel = price * (1.0 - params_.cr * unit(rng_));
  const double abs = params_.ca * unit(rng_);
  return rel - abs;
}

void ZipStrategy::move_toward(double target) {
  const double price = *limit_ * (1.0 + margin_);
  const double delta = beta_ * (target - price);
  const double change = momentum_ * prev_change_ + (1.0 - momentum_) * delta;
  prev_change_ = change;
  double margin = (price + change) / *limit_ - 1.0;
  // buyers keep margin in [-1, 0], sellers in [0, inf)
  margin_ = side_ == Side::bid ? std::clamp(margin, -1.0, 0.0) : std::max(margin, 0.0);
}

void ZipStrategy::on_market_event(const MarketEvent& event,
                                  const std::optional<CustomerOrder>& pending) {
  active_ = pending.has_value();
  if (!limit_ || event.type == TapeEventType::cancel) return;

  const double price = *limit_ * (1.0 + margin_);
  const double q = event.price;
  const bool accepted = event.type == TapeEventType::trade;

  if (side_ == Side::ask) {
    if (accepted) {
      if (price <= q) {
        move_toward(target_up(q));
      } else if (event.side == Side::bid && active_) {
        move_toward(target_down(q));
      }
    } else if (event.side == Side::ask && active_ && price >= q) {
      move_toward(target_down(q));
    }
  } else {
    if (accepted) {
      if (price >= q) {
        move_toward(target_down(q));
      } else if (event.side == Side::ask && active_) {
        move_toward(target_up(q));
      }
    } else if (event.side == Side::bid && active_ && price <= q) {
      move_toward(target_up(q));
    }
  }
}

// ---------------------------------------------------------------- SNPR

std::optional<Price> SniperStrategy::get_quote(const QuoteContext& ctx) {
  const double remaining =
      ctx.duration > 0 ? static_cast<double>(ctx.duration - ctx.now) / ctx.duration : 0.0;
  const Price limit = ctx.order.limit;
  const auto& book = ctx.book;
  const bool late = remaining <= params_.lurk_fraction;

  if (ctx.order.side == Side::bid) {
    if (book.best_ask && *book.best_ask <= limit) {
      const double spread =
          book.best_bid ? static_cast<double>(*book.best_ask - *book.best_bid) / *book.best_ask
                        : 1.0;
      const bool juicy = spread <= params_.snipe_spread &&
                         *book.best_ask <= limit * (1.0 - params_.min_profit);
      if (late || juicy) return *book.best_ask;
    }
    if (!late) return std::nullopt;
    const int shave = static_cast<int>(
        1.0 / (0.01 + remaining / (params_.shave_growth * params_.lurk_fraction)));
    const Price base = book.best_bid.value_or(kMinPrice);
    return std::min<Price>(limit, clamp_price(long{base} + shave));
  }

  if (book.best_bid && *book.best_bid >= limit) {
    const double spread =
        book.best_ask ? static_cast<double>(*book.best_ask - *book.best_bid) / *book.best_ask
                      : 1.0;
    const bool juicy = spread <= params_.snipe_spread &&
                       *book.best_bid >= limit * (1.0 + params_.min_profit);
    if (late || juicy) return *book.best_bid;
  }
  if (!late) return std::nullopt;
  const int shave = static_cast<int>(
      1.0 / (0.01 + remaining / (params_.shave_growth * params_.lurk_fraction)));
  const Price base = book.best_ask.value_or(kMaxPrice);
  return std::max<Price>(limit, clamp_price(long{base} - shave));
}

}  // namespace cdasim
