#pragma once
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "cdasim/types.hpp"

namespace cdasim {

struct Quote {
  TraderId trader{0};
  Side side{Side::bid};
  Price price{kMinPrice};
  Timestep posted{0};
  std::uint64_t seq{0};  // arrival order, breaks time ties inside a timestep
};

struct Trade {
  Timestep time{0};
  Price price{kMinPrice};
  TraderId buyer{0};
  TraderId seller{0};
  Side standing_side{Side::bid};  // side of the resting quote that was hit
  int quantity{1};

  friend bool operator==(const Trade&, const Trade&) = default;
};

// Published view of the book. Carries no trader identities.
struct BookSnapshot {
  std::optional<Price> best_bid;
  std::optional<Price> best_ask;
  int bid_depth{0};
  int ask_depth{0};

  friend bool operator==(const BookSnapshot&, const BookSnapshot&) = default;
};

enum class SubmitStatus : std::uint8_t { rested, executed, rejected };

struct SubmitResult {
  SubmitStatus status{SubmitStatus::rejected};
  std::optional<Trade> trade;
  std::optional<Quote> replaced;  // the trader's previous live quote, if any
  std::string_view reason;
};

// Unit-quantity CDA book with one live quote per trader. Bids are kept in
// (price desc, time asc) order and asks in (price asc, time asc) order, best
// first. Crossing quotes execute at the standing quote's price.
class LimitOrderBook {
 public:
  // Validates price, replaces any live quote of the trader, then matches.
  SubmitResult submit(TraderId trader, Side side, Price price, Timestep t);

  // Removes the trader's live quote; returns it if there was one.
  std::optional<Quote> cancel(TraderId trader);

  [[nodiscard]] BookSnapshot snapshot() const;
  [[nodiscard]] std::optional<Price> best(Side side) const;
  [[nodiscard]] const std::vector<Quote>& side(Side s) const noexcept {
    return s == Side::bid ? bids_ : asks_;
  }
  [[nodiscard]] std::optional<Quote> quote_of(TraderId trader) const;
  [[nodiscard]] bool crossed() const noexcept;
  [[nodiscard]] std::size_t size() const noexcept { return bids_.size() + asks_.size(); }

 private:
  void insert(const Quote& q);

  std::vector<Quote> bids_;
  std::vector<Quote> asks_;
  std::uint64_t next_seq_{0};
};

// lob_anonymized: free-function spelling of LimitOrderBook::snapshot().
inline BookSnapshot lob_anonymized(const LimitOrderBook& book) { return book.snapshot(); }

enum class TapeEventType : std::uint8_t { quote, cancel, trade };
std::string_view to_string(TapeEventType t) noexcept;

struct TapeEntry {
  Timestep time{0};
  TapeEventType type{TapeEventType::quote};
  Price price{kMinPrice};
  std::optional<TraderId> buyer;
  std::optional<TraderId> seller;

  friend bool operator==(const TapeEntry&, const TapeEntry&) = default;
};

// Append-only record of a session. Timestamps never decrease.
class Tape {
 public:
  void record_quote(const Quote& q);
  void record_cancel(const Quote& q, Timestep t);
  void record_trade(const Trade& trade);

  [[nodiscard]] const std::vector<TapeEntry>& entries() const noexcept { return entries_; }
  [[nodiscard]] std::size_t trade_count() const noexcept { return trades_; }

  // CSV columns: timestep,event_type,price,buyer_id,seller_id
  void write_csv(std::ostream& out) const;

  friend bool operator==(const Tape&, const Tape&) = default;

 private:
  void append(TapeEntry e);

  std::vector<TapeEntry> entries_;
  std::size_t trades_{0};
};

// What every trader is told after a book change. Anonymous by construction.
struct MarketEvent {
  TapeEventType type{TapeEventType::quote};
  Timestep time{0};
  Side side{Side::bid};  // quote side, cancelled side, or the standing side of a trade
  Price price{kMinPrice};
  BookSnapshot book;     // book state after the event
};

}  // namespace cdasim
