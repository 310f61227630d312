#pragma once
#include <array>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "cdasim/strategy.hpp"

namespace cdasim {

// Zero-intelligence constrained: uniform random quotes that never lose money.
class ZicStrategy final : public Strategy {
 public:
  ZicStrategy(const ZicParams& params, std::uint64_t seed) : params_(params), rng_(seed) {}

  [[nodiscard]] StrategyKind kind() const noexcept override { return StrategyKind::ZIC; }
  std::optional<Price> get_quote(const QuoteContext& ctx) override;
  void on_market_event(const MarketEvent&, const std::optional<CustomerOrder>&) override {}

 private:
  ZicParams params_;
  Rng rng_;
};

// Zero-Intelligence-Plus. Keeps a profit margin and adapts it toward target
// prices derived from observed shouts with a Widrow-Hoff rule with momentum.
class ZipStrategy final : public Strategy {
 public:
  ZipStrategy(Side side, const ZipParams& params, std::uint64_t seed);
  // Fixed learning parameters, used by tests.
  ZipStrategy(Side side, double margin, double beta, double momentum, const ZipParams& params,
              std::uint64_t seed);

  [[nodiscard]] StrategyKind kind() const noexcept override { return StrategyKind::ZIP; }
  void on_order(const CustomerOrder& order) override;
  std::optional<Price> get_quote(const QuoteContext& ctx) override;
  void on_market_event(const MarketEvent& event,
                       const std::optional<CustomerOrder>& pending) override;

  [[nodiscard]] double margin() const noexcept { return margin_; }
  [[nodiscard]] double beta() const noexcept { return beta_; }
  [[nodiscard]] double momentum() const noexcept { return momentum_; }
  // Continuous shout price limit * (1 + margin); nothing before the first order.
  [[nodiscard]] std::optional<double> shout_price() const;

  static Price quote_for(Price limit, double margin) noexcept;

 private:
  double target_up(double price);
  double target_down(double price);
  void move_toward(double target);

  Side side_;
  ZipParams params_;
  Rng rng_;
  double margin_{0.0};
  double beta_{0.0};
  double momentum_{0.0};
  double prev_change_{0.0};
  std::optional<Price> limit_;
  bool active_{false};
};

// Kaplan-style sniper: lurks until the session is nearly over or the spread
// is narrow and a profitable deal is standing, then steals it.
class SniperStrategy final : public Strategy {
 public:
  SniperStrategy(const SniperParams& params) : params_(params) {}

  [[nodiscard]] StrategyKind kind() const noexcept override { return StrategyKind::SNPR; }
  std::optional<Price> get_quote(const QuoteContext& ctx) override;
  void on_market_event(const MarketEvent&, const std::optional<CustomerOrder>&) override {}

 private:
  SniperParams params_;
};

// Belief-based trader. Acceptance beliefs come from the recent shout history
// (Gjerstad-Dickhaut counting); the quote maximizes expected discounted
// surplus over the remaining opportunities (GDX dynamic programme). With a
// horizon of one it reduces to plain GD belief maximization.
class GdxStrategy final : public Strategy {
 public:
  GdxStrategy(Side side, const GdxParams& params);

  [[nodiscard]] StrategyKind kind() const noexcept override { return StrategyKind::GDX; }
  std::optional<Price> get_quote(const QuoteContext& ctx) override;
  void on_market_event(const MarketEvent& event,
                       const std::optional<CustomerOrder>& pending) override;

  // Probability that a shout at price is accepted, given the history and book.
  [[nodiscard]] double belief(Price price, const BookSnapshot& book) const;
  [[nodiscard]] std::size_t history_size() const noexcept { return history_.size(); }

  // Price maximizing expected surplus with the given number of remaining
  // opportunities. Ties go to the lowest bid or the highest ask.
  [[nodiscard]] Price best_price(Price limit, const BookSnapshot& book, int opportunities) const;

 private:
  struct Shout {
    Side side;
    Price price;
    bool accepted;
    std::size_t epoch;  // trades seen before this shout
  };
  struct Knot {
    Price price;
    double value;
  };
  // Belief curve: certain acceptance from `sure` onwards (towards the
  // aggressive end), linear between knots (ascending price) elsewhere.
  struct Curve {
    std::vector<Knot> knots;
    Price sure;
    [[nodiscard]] double at(Side side, Price price) const;
  };
  [[nodiscard]] Curve belief_curve(const BookSnapshot& book) const;
  void count(const Shout& s, int delta);
  void trim();

  Side side_;
  GdxParams params_;
  std::deque<Shout> history_;
  // accepted own, rejected own, opposite side shouts per price
  std::map<Price, std::array<int, 3>> counts_;
  std::size_t trades_seen_{0};
};

// Adaptive-Aggressive trader: tracks a moving equilibrium estimate, learns an
// aggressiveness level (short term) and the shape of its target curve (long
// term), and moves its quote a fraction of the way toward the target.
class AaStrategy final : public Strategy {
 public:
  AaStrategy(Side side, const AaParams& params, std::uint64_t seed);

  [[nodiscard]] StrategyKind kind() const noexcept override { return StrategyKind::AA; }
  void on_order(const CustomerOrder& order) override;
  std::optional<Price> get_quote(const QuoteContext& ctx) override;
  void on_market_event(const MarketEvent& event,
                       const std::optional<CustomerOrder>& pending) override;

  [[nodiscard]] std::optional<double> equilibrium_estimate() const noexcept { return p_star_; }
  [[nodiscard]] double aggressiveness() const noexcept { return r_; }
  [[nodiscard]] double theta() const noexcept { return theta_; }
  void set_aggressiveness(double r) noexcept { r_ = r; }

  // Target price for aggressiveness r in [-1, 1]; buyers' targets rise with
  // r, sellers' fall.
  static double target_price(Side side, double limit, double p_star, double r, double theta,
                             double market_max);
  // Inverse of target_price: the aggressiveness whose target equals price.
  static double aggressiveness_for(Side side, double limit, double p_star, double price,
                                   double theta, double market_max);

 private:
  void observe_trade(Price price);
  void update_aggressiveness(double shout, bool more_aggressive);
  [[nodiscard]] std::optional<double> target() const;

  Side side_;
  AaParams params_;
  Rng rng_;
  double beta1_;
  double beta2_;
  double r_;
  double theta_;
  std::optional<double> p_star_;
  std::optional<double> alpha_min_;
  std::optional<double> alpha_max_;
  std::deque<Price> transactions_;
  std::optional<Price> limit_;
};

}  // namespace cdasim
