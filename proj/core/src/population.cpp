#include "cdasim/population.hpp"

#include <stdexcept>

namespace cdasim {

int TraderPopulation::buyers() const noexcept {
  int n = 0;
  for (const auto& c : counts) n += c.buyers;
  return n;
}

int TraderPopulation::sellers() const noexcept {
  int n = 0;
  for (const auto& c : counts) n += c.sellers;
  return n;
}

std::vector<StrategyKind> TraderPopulation::kinds() const {
  std::vector<StrategyKind> out;
  for (auto k : kAllKinds)
    if (traders(k) > 0) out.push_back(k);
  return out;
}

std::string TraderPopulation::key(std::span<const StrategyKind> order) const {
  bool symmetric = true;
  for (auto k : order) symmetric = symmetric && (*this)[k].buyers == (*this)[k].sellers;
  std::string out;
  for (auto k : order) {
    if (!out.empty()) out += '-';
    out += std::to_string((*this)[k].buyers);
    if (!symmetric) out += ':' + std::to_string((*this)[k].sellers);
  }
  return out;
}

TraderPopulation symmetric_population(std::span<const StrategyKind> kinds,
                                      std::span<const int> per_side) {
  if (kinds.size() != per_side.size())
    throw std::invalid_argument("kinds and counts differ in length");
  TraderPopulation pop;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    pop[kinds[i]].buyers += per_side[i];
    pop[kinds[i]].sellers += per_side[i];
  }
  return pop;
}

}  // namespace cdasim
