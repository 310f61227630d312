#pragma once
#include <array>
#include <compare>
#include <span>
#include <string>
#include <vector>

#include "cdasim/types.hpp"

namespace cdasim {

struct SideCounts {
  int buyers{0};
  int sellers{0};

  friend auto operator<=>(const SideCounts&, const SideCounts&) = default;
};

// Number of buyers and sellers following each strategy: one "ratio point".
struct TraderPopulation {
  std::array<SideCounts, kKindCount> counts{};

  SideCounts& operator[](StrategyKind k) noexcept { return counts[index_of(k)]; }
  const SideCounts& operator[](StrategyKind k) const noexcept { return counts[index_of(k)]; }

  [[nodiscard]] int buyers() const noexcept;
  [[nodiscard]] int sellers() const noexcept;
  [[nodiscard]] int traders(StrategyKind k) const noexcept {
    return (*this)[k].buyers + (*this)[k].sellers;
  }
  [[nodiscard]] bool empty() const noexcept { return buyers() + sellers() == 0; }
  // Kinds with at least one trader, in canonical (name) order.
  [[nodiscard]] std::vector<StrategyKind> kinds() const;

  // Adds one buyer and one seller of the kind.
  void add_pair(StrategyKind k) noexcept {
    ++(*this)[k].buyers;
    ++(*this)[k].sellers;
  }

  // Dash-joined counts in the given kind order: "4-4-4" when every kind has
  // as many buyers as sellers, "buyers:sellers" pairs otherwise.
  [[nodiscard]] std::string key(std::span<const StrategyKind> order) const;

  friend auto operator<=>(const TraderPopulation&, const TraderPopulation&) = default;
};

// Same count of buyers and sellers per kind.
TraderPopulation symmetric_population(std::span<const StrategyKind> kinds,
                                      std::span<const int> per_side);

}  // namespace cdasim
