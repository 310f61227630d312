#include <algorithm>
#include <cmath>
#include <vector>

#include "cdasim/strategies.hpp"

namespace cdasim {

namespace {

enum Bucket : std::size_t { kAccepted = 0, kRejected = 1, kOther = 2 };

}  // namespace

GdxStrategy::GdxStrategy(Side side, const GdxParams& params) : side_(side), params_(params) {}

double GdxStrategy::Curve::at(Side side, Price price) const {
  if (side == Side::bid ? price >= sure : price <= sure) return 1.0;
  const auto it = std::upper_bound(knots.begin(), knots.end(), price,
                                   [](Price p, const Knot& k) { return p < k.price; });
  if (it == knots.begin()) return knots.front().value;
  if (it == knots.end()) return knots.back().value;
  const auto& a = *(it - 1);
  const auto& b = *it;
  return a.value + (b.value - a.value) * static_cast<double>(price - a.price) /
                       static_cast<double>(b.price - a.price);
}

// Gjerstad-Dickhaut counts at each observed shout price:
//   buyer:  q(b) = (TBL(b) + AL(b)) / (TBL(b) + AL(b) + RBG(b))
//   seller: p(a) = (TAG(a) + BG(a)) / (TAG(a) + BG(a) + RAL(a))
// TBL: accepted bids <= b, AL: asks <= b, RBG: rejected bids >= b, and the
// mirror images for sellers. A bid at the price floor is never accepted and
// one at the best ask (or the ceiling) always is; in between the belief is
// interpolated linearly between observed prices.
GdxStrategy::Curve GdxStrategy::belief_curve(const BookSnapshot& book) const {
  const bool buyer = side_ == Side::bid;
  Curve curve;
  curve.sure = buyer ? (book.best_ask ? *book.best_ask : kMaxPrice)
                     : (book.best_bid ? *book.best_bid : kMinPrice);
  const Price never = buyer ? kMinPrice : kMaxPrice;

  // Observed prices strictly between the anchors, ascending.
  const Price lo = buyer ? never : curve.sure;
  const Price hi = buyer ? curve.sure : never;
  const auto first = counts_.upper_bound(lo);
  const auto last = counts_.lower_bound(hi);

  // favourable: accepted own and opposite shouts no more aggressive than p;
  // against: rejected own shouts at least as aggressive.
  long below_fav = 0;
  long below_rej = 0;
  long total_fav = 0;
  long total_rej = 0;
  for (const auto& [p, c] : counts_) {
    total_fav += c[kAccepted] + c[kOther];
    total_rej += c[kRejected];
    if (p <= lo) {
      below_fav += c[kAccepted] + c[kOther];
      below_rej += c[kRejected];
    }
  }

  curve.knots.push_back({lo, buyer ? 0.0 : 1.0});
  for (auto it = first; it != last; ++it) {
    const auto& c = it->second;
    // cumulative including this price
    const long fav_le = below_fav + c[kAccepted] + c[kOther];
    const long rej_le = below_rej + c[kRejected];
    const long fav_ge = total_fav - below_fav;
    const long rej_ge = total_rej - below_rej;
    below_fav = fav_le;
    below_rej = rej_le;
    const long favourable = buyer ? fav_le : fav_ge;
    const long against = buyer ? rej_ge : rej_le;
    if (favourable + against == 0) continue;
    curve.knots.push_back(
        {it->first, static_cast<double>(favourable) / static_cast<double>(favourable + against)});
  }
  if (hi != lo) curve.knots.push_back({hi, buyer ? 1.0 : 0.0});
  return curve;
}

double GdxStrategy::belief(Price price, const BookSnapshot& book) const {
  if (!is_valid_price(price)) return 0.0;
  return belief_curve(book).at(side_, price);
}

Price GdxStrategy::best_price(Price limit, const BookSnapshot& book, int opportunities) const {
  const bool buyer = side_ == Side::bid;
  const auto curve = belief_curve(book);
  const Price cmin = buyer ? kMinPrice : limit;
  const Price cmax = buyer ? limit : kMaxPrice;

  // On each linear stretch of the belief the expected surplus is concave, so
  // the stretch ends and the integers around its vertex hold the maximum.
  // Vertices depend on the continuation value; collect them per stage.
  std::vector<Price> fixed;
  auto add = [&](std::vector<Price>& v, Price p) {
    if (p >= cmin && p <= cmax) v.push_back(p);
  };
  add(fixed, cmin);
  add(fixed, cmax);
  add(fixed, curve.sure);
  for (std::size_t k = 0; k < curve.knots.size(); ++k) {
    add(fixed, curve.knots[k].price);
    add(fixed, curve.knots[k].price - 1);
    add(fixed, curve.knots[k].price + 1);
  }

  auto surplus = [&](Price p) { return static_cast<double>(buyer ? limit - p : p - limit); };
  auto preferred = [&](Price a, Price b) { return buyer ? a < b : a > b; };

  // V(n) = max_p q(p) * s(p) + (1 - q(p)) * gamma * V(n - 1), V(0) = 0.
  double value = 0.0;
  Price best = buyer ? cmin : cmax;
  std::vector<Price> candidates;
  for (int stage = 1; stage <= std::max(1, opportunities); ++stage) {
    const double wait = params_.gamma * value;
    candidates = fixed;
    for (std::size_t k = 0; k + 1 < curve.knots.size(); ++k) {
      const auto& a = curve.knots[k];
      const auto& b = curve.knots[k + 1];
      const double slope = (b.value - a.value) / static_cast<double>(b.price - a.price);
      if (slope == 0.0) continue;
      // q(p) = a.value + slope (p - a.price); g(p) = s(p) - wait, linear in p
      const double g0 = surplus(a.price) - wait;
      const double gs = buyer ? -1.0 : 1.0;
      // d/dp [q g] = slope g + gs q = 0 with p = a.price + x
      const double x = -(slope * g0 + gs * a.value) / (2.0 * slope * gs);
      if (!std::isfinite(x)) continue;
      const double v = static_cast<double>(a.price) + x;
      if (v < a.price - 1 || v > b.price + 1) continue;
      add(candidates, static_cast<Price>(std::floor(v)));
      add(candidates, static_cast<Price>(std::ceil(v)));
    }
    std::sort(candidates.begin(), candidates.end(), preferred);
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // Candidates run from the preferred tie-break end, so a strict > keeps
    // the lowest bid / highest ask among equals.
    double stage_best = -1.0;
    for (Price p : candidates) {
      const double q = curve.at(side_, p);
      const double ev = q * (surplus(p) - wait) + wait;
      if (ev > stage_best) {
        stage_best = ev;
        best = p;
      }
    }
    value = stage_best;
  }
  return best;
}

std::optional<Price> GdxStrategy::get_quote(const QuoteContext& ctx) {
  const int remaining = std::max<Timestep>(1, ctx.duration - ctx.now);
  const int opportunities = std::min(remaining, std::max(1, params_.horizon));
  return best_price(ctx.order.limit, ctx.book, opportunities);
}

void GdxStrategy::count(const Shout& s, int delta) {
  const std::size_t bucket = s.side != side_ ? kOther : s.accepted ? kAccepted : kRejected;
  auto it = counts_.try_emplace(s.price).first;
  it->second[bucket] += delta;
  if (it->second == std::array<int, 3>{}) counts_.erase(it);
}

void GdxStrategy::on_market_event(const MarketEvent& event, const std::optional<CustomerOrder>&) {
  switch (event.type) {
    case TapeEventType::quote: {
      const Shout s{event.side, event.price, false, trades_seen_};
      history_.push_back(s);
      count(s, 1);
      break;
    }
    case TapeEventType::cancel:
      break;
    case TapeEventType::trade: {
      // the standing shout at this price is now an accepted one
      auto it = std::find_if(history_.rbegin(), history_.rend(), [&](const Shout& s) {
        return !s.accepted && s.side == event.side && s.price == event.price;
      });
      if (it != history_.rend()) {
        count(*it, -1);
        it->accepted = true;
        count(*it, 1);
      } else {
        const Shout s{event.side, event.price, true, trades_seen_};
        history_.push_back(s);
        count(s, 1);
      }
      const Shout aggressor{opposite(event.side), event.price, true, trades_seen_};
      history_.push_back(aggressor);
      count(aggressor, 1);
      ++trades_seen_;
      trim();
      break;
    }
  }
}

void GdxStrategy::trim() {
  const auto window = static_cast<std::size_t>(std::max(1, params_.memory_trades));
  while (!history_.empty() && history_.front().epoch + window < trades_seen_) {
    count(history_.front(), -1);
    history_.pop_front();
  }
}

}  // namespace cdasim
