#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

namespace cdasim {

// Prices are integer ticks; the whole simulator stays in integer arithmetic
// for anything that touches the book or a balance.
using Price = std::int32_t;
using TraderId = std::int32_t;
using Timestep = std::int32_t;
using Rng = std::mt19937_64;

inline constexpr Price kMinPrice = 1;
inline constexpr Price kMaxPrice = 1000;

constexpr bool is_valid_price(Price p) noexcept { return p >= kMinPrice && p <= kMaxPrice; }
constexpr Price clamp_price(long long p) noexcept {
  return static_cast<Price>(p < kMinPrice ? kMinPrice : (p > kMaxPrice ? kMaxPrice : p));
}

enum class Side : std::uint8_t { bid, ask };

constexpr Side opposite(Side s) noexcept { return s == Side::bid ? Side::ask : Side::bid; }
std::string_view to_string(Side s) noexcept;

// Declaration order is the lexicographic order of the names; dominance ties
// are broken by this order.
enum class StrategyKind : std::uint8_t { AA, GDX, SNPR, ZIC, ZIP };

inline constexpr std::size_t kKindCount = 5;
inline constexpr std::array<StrategyKind, kKindCount> kAllKinds{
    StrategyKind::AA, StrategyKind::GDX, StrategyKind::SNPR, StrategyKind::ZIC, StrategyKind::ZIP};

constexpr std::size_t index_of(StrategyKind k) noexcept { return static_cast<std::size_t>(k); }
std::string_view to_string(StrategyKind k) noexcept;
std::optional<StrategyKind> parse_kind(std::string_view name) noexcept;

struct CustomerOrder {
  Side side{Side::bid};
  Price limit{kMinPrice};
  Timestep issued{0};

  friend bool operator==(const CustomerOrder&, const CustomerOrder&) = default;
};

}  // namespace cdasim
