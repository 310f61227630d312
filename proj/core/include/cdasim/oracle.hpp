#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdasim/population.hpp"
#include "cdasim/records.hpp"
#include "cdasim/schedules.hpp"
#include "cdasim/session.hpp"

namespace cdasim {

// All compositions of n_per_side into |set| positive parts, applied equally to
// buyers and sellers, in lexicographic order of the count vectors. Returns
// C(n_per_side - 1, |set| - 1) populations; empty (with a diagnostic) when
// n_per_side < |set|.
std::vector<TraderPopulation> enumerate_populations(int n_per_side,
                                                    std::span<const StrategyKind> strategy_set,
                                                    std::string* diagnostic = nullptr);

struct NoiseSpec {
  double p{0.0};
  std::vector<StrategyKind> strategy_set;
};

// Largest meaningful noise: every trader equally likely to be seen as any kind.
double p_max(std::span<const StrategyKind> strategy_set);

// Each trader independently, with probability p, is reported as a kind drawn
// uniformly from the set minus its true kind. Accepts any p in [0, 1];
// experiments restrict their grids to [0, p_max].
std::vector<StrategyKind> apply_noise(std::span<const StrategyKind> trader_kinds,
                                      const NoiseSpec& noise, Rng& rng);

// apply_noise over the buyers and the sellers of a population, re-counted.
// The result may have unequal sides per kind.
TraderPopulation distort_population(const TraderPopulation& population, const NoiseSpec& noise,
                                    Rng& rng);

struct Prediction {
  StrategyKind kind{StrategyKind::AA};
  KindAverages average;  // pooled over all subtrials, buyers and sellers together
  bool all_zero{false};  // every kind earned nothing; kind comes from the tie-break
  std::vector<SessionResult> sessions;  // kept only when requested
};

// Highest pooled average profit wins; exact ties go to the first kind by name.
StrategyKind dominant_kind(const KindAverages& average);

// Runs `subtrials` sessions of the same population with seeds
// derive_seed({seed, k}) and pools balances per kind across all of them.
Prediction predict_dominant(const OrderSchedule& schedule, const TraderPopulation& population,
                            int subtrials, std::uint64_t seed, const SessionConfig& config,
                            bool keep_sessions = false);

struct ExperimentSettings {
  std::vector<StrategyKind> strategy_set;
  SessionConfig session;
  int subtrials{1};  // K: prediction and real subtrials per cell
  std::uint64_t master_seed{1};
  int jobs{1};
};

enum class Phase : std::uint64_t { noise = 0, prediction = 1, real = 2 };

std::uint64_t cell_seed(std::uint64_t master, int schedule_id, int population_index, int p_index);
std::uint64_t phase_seed(std::uint64_t cell, Phase phase);

// One cell: distort (p > 0), predict on the observed population, then run the
// real phase on the true population plus one buyer and one seller of the
// predicted kind.
ExperimentRecord run_cell(const OrderSchedule& schedule, int schedule_id,
                          const TraderPopulation& population, int population_index, double p,
                          int p_index, const ExperimentSettings& settings);

struct CellFailure {
  int schedule_id{0};
  int population_index{0};
  int p_index{0};
  std::string message;
};

struct ExperimentOutput {
  std::vector<ExperimentRecord> records;  // sorted by (schedule, population, p index)
  std::vector<CellFailure> failures;
};

// Perfect-oracle experiment: every (schedule, population) at p = 0.
ExperimentOutput experiment1(std::span<const OrderSchedule> schedules,
                             std::span<const TraderPopulation> populations,
                             const ExperimentSettings& settings);

// Noisy-oracle experiment: every (schedule, population, p).
ExperimentOutput experiment2(std::span<const OrderSchedule> schedules,
                             std::span<const TraderPopulation> populations,
                             std::span<const double> p_grid, const ExperimentSettings& settings);

struct LandscapePoint {
  std::array<int, 3> grid{};  // simplex coordinates, summing to the resolution
  TraderPopulation population;
  StrategyKind dominant{StrategyKind::AA};
  KindAverages average;
};

// Integer per-side counts nearest to a simplex point (largest remainder,
// remainder ties broken by kind name). Nothing when a kind with positive
// weight would get zero traders.
std::optional<TraderPopulation> population_at(std::span<const StrategyKind> kinds,
                                              std::array<int, 3> grid, int resolution,
                                              int n_per_side);

// Prediction seed of a landscape point. Depends on the counts per kind, not
// on the order the kinds were listed in.
std::uint64_t landscape_seed(std::uint64_t master, const TraderPopulation& population);

// Dominant kind at every grid point of the 2-simplex over three kinds.
std::vector<LandscapePoint> dominance_landscape(const OrderSchedule& schedule,
                                                std::span<const StrategyKind> kinds,
                                                int n_per_side, int resolution,
                                                const ExperimentSettings& settings);

}  // namespace cdasim
