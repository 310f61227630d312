#include "cdasim/exchange.hpp"

#include <algorithm>
#include <ostream>

namespace cdasim {

std::string_view to_string(Side s) noexcept { return s == Side::bid ? "bid" : "ask"; }

std::string_view to_string(StrategyKind k) noexcept {
  switch (k) {
    case StrategyKind::AA: return "AA";
    case StrategyKind::GDX: return "GDX";
    case StrategyKind::SNPR: return "SNPR";
    case StrategyKind::ZIC: return "ZIC";
    case StrategyKind::ZIP: return "ZIP";
  }
  return "?";
}

std::optional<StrategyKind> parse_kind(std::string_view name) noexcept {
  for (auto k : kAllKinds)
    if (to_string(k) == name) return k;
  return std::nullopt;
}

std::string_view to_string(TapeEventType t) noexcept {
  switch (t) {
    case TapeEventType::quote: return "quote";
    case TapeEventType::cancel: return "cancel";
    case TapeEventType::trade: return "trade";
  }
  return "?";
}

namespace {

// true if a should sit ahead of b on its side of the book
bool ahead(const Quote& a, const Quote& b) noexcept {
  if (a.price != b.price) return a.side == Side::bid ? a.price > b.price : a.price < b.price;
  return a.seq < b.seq;
}

}  // namespace

SubmitResult LimitOrderBook::submit(TraderId trader, Side side, Price price, Timestep t) {
  SubmitResult result;
  if (!is_valid_price(price)) {
    result.status = SubmitStatus::rejected;
    result.reason = "price outside [1, 1000]";
    return result;
  }
  result.replaced = cancel(trader);

  auto& opposite_side = side == Side::bid ? asks_ : bids_;
  if (!opposite_side.empty()) {
    const Quote& standing = opposite_side.front();
    const bool crosses = side == Side::bid ? price >= standing.price : price <= standing.price;
    if (crosses) {
      Trade trade;
      trade.time = t;
      trade.price = standing.price;
      trade.buyer = side == Side::bid ? trader : standing.trader;
      trade.seller = side == Side::ask ? trader : standing.trader;
      trade.standing_side = standing.side;
      opposite_side.erase(opposite_side.begin());
      result.status = SubmitStatus::executed;
      result.trade = trade;
      return result;
    }
  }

  insert(Quote{trader, side, price, t, next_seq_++});
  result.status = SubmitStatus::rested;
  return result;
}

void LimitOrderBook::insert(const Quote& q) {
  auto& book_side = q.side == Side::bid ? bids_ : asks_;
  auto pos = std::find_if(book_side.begin(), book_side.end(),
                          [&](const Quote& other) { return ahead(q, other); });
  book_side.insert(pos, q);
}

std::optional<Quote> LimitOrderBook::cancel(TraderId trader) {
  for (auto* book_side : {&bids_, &asks_}) {
    auto it = std::find_if(book_side->begin(), book_side->end(),
                           [&](const Quote& q) { return q.trader == trader; });
    if (it != book_side->end()) {
      Quote q = *it;
      book_side->erase(it);
      return q;
    }
  }
  return std::nullopt;
}

std::optional<Price> LimitOrderBook::best(Side s) const {
  const auto& book_side = side(s);
  if (book_side.empty()) return std::nullopt;
  return book_side.front().price;
}

BookSnapshot LimitOrderBook::snapshot() const {
  return BookSnapshot{best(Side::bid), best(Side::ask), static_cast<int>(bids_.size()),
                      static_cast<int>(asks_.size())};
}

std::optional<Quote> LimitOrderBook::quote_of(TraderId trader) const {
  for (const auto* book_side : {&bids_, &asks_})
    for (const auto& q : *book_side)
      if (q.trader == trader) return q;
  return std::nullopt;
}

bool LimitOrderBook::crossed() const noexcept {
  return !bids_.empty() && !asks_.empty() && bids_.front().price >= asks_.front().price;
}

void Tape::append(TapeEntry e) {
  if (!entries_.empty() && e.time < entries_.back().time) e.time = entries_.back().time;
  entries_.push_back(e);
}

void Tape::record_quote(const Quote& q) {
  TapeEntry e{q.posted, TapeEventType::quote, q.price, std::nullopt, std::nullopt};
  (q.side == Side::bid ? e.buyer : e.seller) = q.trader;
  append(e);
}

void Tape::record_cancel(const Quote& q, Timestep t) {
  TapeEntry e{t, TapeEventType::cancel, q.price, std::nullopt, std::nullopt};
  (q.side == Side::bid ? e.buyer : e.seller) = q.trader;
  append(e);
}

void Tape::record_trade(const Trade& trade) {
  append(TapeEntry{trade.time, TapeEventType::trade, trade.price, trade.buyer, trade.seller});
  ++trades_;
}

void Tape::write_csv(std::ostream& out) const {
  out << "timestep,event_type,price,buyer_id,seller_id\n";
  for (const auto& e : entries_) {
    out << e.time << ',' << to_string(e.type) << ',' << e.price << ',';
    if (e.buyer) out << *e.buyer;
    out << ',';
    if (e.seller) out << *e.seller;
    out << '\n';
  }
}

}  // namespace cdasim
