#include <algorithm>
#include <cmath>

#include "cdasim/strategies.hpp"

namespace cdasim {

namespace {

// (e^{x theta} - 1) / (e^theta - 1): 0 at x = 0, 1 at x = 1 for any theta != 0.
double curve(double x, double theta) { return std::expm1(x * theta) / std::expm1(theta); }

// Inverse of curve on [0, 1].
double curve_inverse(double y, double theta) {
  y = std::clamp(y, 0.0, 1.0);
  return std::log1p(y * std::expm1(theta)) / theta;
}

double nonzero(double theta) {
  constexpr double kEps = 1e-6;
  if (std::abs(theta) >= kEps) return theta;
  return theta < 0.0 ? -kEps : kEps;
}

}  // namespace

AaStrategy::AaStrategy(Side side, const AaParams& params, std::uint64_t seed)
    : side_(side), params_(params), rng_(seed), theta_(nonzero(params.theta_init)) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  beta1_ = params_.beta1_min + (params_.beta1_max - params_.beta1_min) * unit(rng_);
  beta2_ = params_.beta2_min + (params_.beta2_max - params_.beta2_min) * unit(rng_);
  r_ = -params_.initial_r_max * unit(rng_);
}

double AaStrategy::target_price(Side side, double limit, double p_star, double r, double theta,
                                double market_max) {
  theta = nonzero(theta);
  r = std::clamp(r, -1.0, 1.0);
  if (side == Side::bid) {
    if (limit <= p_star) {  // extra-marginal
      return r >= 0.0 ? limit : limit * (1.0 - curve(-r, theta));
    }
    return r >= 0.0 ? p_star + (limit - p_star) * curve(r, theta)
                    : p_star * (1.0 - curve(-r, theta));
  }
  if (limit >= p_star) {  // extra-marginal
    return r >= 0.0 ? limit : limit + (market_max - limit) * curve(-r, theta);
  }
  return r >= 0.0 ? limit + (p_star - limit) * (1.0 - curve(r, theta))
                  : p_star + (market_max - p_star) * curve(-r, theta);
}

double AaStrategy::aggressiveness_for(Side side, double limit, double p_star, double price,
                                      double theta, double market_max) {
  theta = nonzero(theta);
  if (side == Side::bid) {
    if (limit <= p_star) {
      if (price >= limit) return 0.0;
      return -curve_inverse(1.0 - price / limit, theta);
    }
    if (price >= p_star) return curve_inverse((price - p_star) / (limit - p_star), theta);
    return -curve_inverse(1.0 - price / p_star, theta);
  }
  if (limit >= p_star) {
    if (price <= limit) return 0.0;
    return -curve_inverse((price - limit) / (market_max - limit), theta);
  }
  if (price <= p_star) return curve_inverse(1.0 - (price - limit) / (p_star - limit), theta);
  return -curve_inverse((price - p_star) / (market_max - p_star), theta);
}

void AaStrategy::on_order(const CustomerOrder& order) { limit_ = order.limit; }

std::optional<double> AaStrategy::target() const {
  if (!limit_ || !p_star_) return std::nullopt;
  return target_price(side_, *limit_, *p_star_, r_, theta_, kMaxPrice);
}

std::optional<Price> AaStrategy::get_quote(const QuoteContext& ctx) {
  limit_ = ctx.order.limit;
  const double limit = ctx.order.limit;
  const auto& book = ctx.book;

  if (!p_star_) {
    // no transaction seen yet: quote off the limit by the initial margin
    const double m = params_.initial_margin;
    if (side_ == Side::bid) return clamp_price(std::llround(std::floor(limit * (1.0 - m))));
    return clamp_price(std::llround(std::ceil(limit * (1.0 + m))));
  }

  const double tau = *target();
  if (side_ == Side::bid) {
    const double o_bid = book.best_bid.value_or(kMinPrice);
    if (book.best_bid && limit <= o_bid) return std::nullopt;
    if (book.best_ask && *book.best_ask <= tau) return *book.best_ask;
    const double goal = std::min(tau, limit);
    auto bid = clamp_price(std::llround(std::floor(o_bid + (goal - o_bid) / params_.eta)));
    // whole ticks: any goal beyond the best quote is worth at least a tick
    if (book.best_bid && goal > o_bid) bid = std::max<Price>(bid, *book.best_bid + 1);
    return std::min<Price>(ctx.order.limit, bid);
  }
  const double o_ask = book.best_ask.value_or(kMaxPrice);
  if (book.best_ask && limit >= o_ask) return std::nullopt;
  if (book.best_bid && *book.best_bid >= tau) return *book.best_bid;
  const double goal = std::max(tau, limit);
  auto ask = clamp_price(std::llround(std::ceil(o_ask - (o_ask - goal) / params_.eta)));
  if (book.best_ask && goal < o_ask) ask = std::min<Price>(ask, *book.best_ask - 1);
  return std::max<Price>(ctx.order.limit, ask);
}

void AaStrategy::observe_trade(Price price) {
  transactions_.push_back(price);
  const auto window = static_cast<std::size_t>(std::max(1, params_.eq_window));
  while (transactions_.size() > window) transactions_.pop_front();

  // weighted moving average, most recent transaction weighted highest
  double num = 0.0;
  double den = 0.0;
  double w = 1.0;
  for (auto it = transactions_.rbegin(); it != transactions_.rend(); ++it) {
    num += w * *it;
    den += w;
    w *= params_.eq_decay;
  }
  p_star_ = num / den;

  // Smith's alpha: relative RMS deviation of recent prices from the estimate
  double sq = 0.0;
  for (Price t : transactions_) sq += (t - *p_star_) * (t - *p_star_);
  const double alpha = std::sqrt(sq / static_cast<double>(transactions_.size())) / *p_star_;
  alpha_min_ = std::min(alpha_min_.value_or(alpha), alpha);
  alpha_max_ = std::max(alpha_max_.value_or(alpha), alpha);

  const double span = *alpha_max_ - *alpha_min_;
  const double alpha_hat = span > 0.0 ? (alpha - *alpha_min_) / span : 0.5;
  const double theta_star =
      (params_.theta_max - params_.theta_min) *
          (1.0 - alpha_hat * std::exp(params_.gamma * (alpha_hat - 1.0))) +
      params_.theta_min;
  theta_ = nonzero(theta_ + beta2_ * (theta_star - theta_));
}

void AaStrategy::update_aggressiveness(double shout, bool more_aggressive) {
  const double r_shout =
      aggressiveness_for(side_, *limit_, *p_star_, shout, theta_, kMaxPrice);
  const double delta = more_aggressive
                           ? (1.0 + params_.lambda_r) * r_shout + params_.lambda_a
                           : (1.0 - params_.lambda_r) * r_shout - params_.lambda_a;
  r_ = std::clamp(r_ + beta1_ * (delta - r_), -1.0, 1.0);
}

void AaStrategy::on_market_event(const MarketEvent& event, const std::optional<CustomerOrder>&) {
  if (event.type == TapeEventType::cancel) return;
  const double q = event.price;

  if (event.type == TapeEventType::trade) {
    observe_trade(event.price);
    if (!limit_) return;
    const double tau = *target();
    // a buyer whose target is above the deal price can afford to relax
    if (side_ == Side::bid) {
      update_aggressiveness(q, tau < q);
    } else {
      update_aggressiveness(q, tau > q);
    }
    return;
  }

  if (!limit_ || !p_star_ || event.side != side_) return;
  const double tau = *target();
  // a competing shout better than our target: become more aggressive
  if (side_ == Side::bid && tau <= q) update_aggressiveness(q, true);
  if (side_ == Side::ask && tau >= q) update_aggressiveness(q, true);
}

}  // namespace cdasim
