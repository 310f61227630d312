#include "cdasim/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cdasim/parallel.hpp"
#include "cdasim/seed.hpp"

namespace cdasim {

namespace {

constexpr double kProbabilityTolerance = 1e-12;

void compositions(int remaining, std::size_t parts, std::vector<int>& current,
                  std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    current.push_back(remaining);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int first = 1; first <= remaining - static_cast<int>(parts - 1); ++first) {
    current.push_back(first);
    compositions(remaining - first, parts - 1, current, out);
    current.pop_back();
  }
}

struct Pooled {
  KindAverages average;
  double market_average{0.0};
  std::size_t trades{0};
  std::vector<SessionResult> sessions;
};

Pooled pool_sessions(const OrderSchedule& schedule, const TraderPopulation& population,
                     int subtrials, std::uint64_t seed, const SessionConfig& config, bool keep) {
  if (subtrials < 1) throw std::invalid_argument("at least one subtrial is required");
  std::array<long, kKindCount> sum{};
  std::array<long, kKindCount> count{};
  long total = 0;
  long traders = 0;
  Pooled pooled;
  for (int k = 0; k < subtrials; ++k) {
    auto result = run_session(schedule, population, config,
                              derive_seed({seed, static_cast<std::uint64_t>(k)}));
    for (const auto& t : result.traders) {
      sum[index_of(t.kind)] += t.balance;
      ++count[index_of(t.kind)];
      total += t.balance;
      ++traders;
    }
    pooled.trades += result.trade_count;
    if (keep) pooled.sessions.push_back(std::move(result));
  }
  for (std::size_t i = 0; i < kKindCount; ++i)
    if (count[i] > 0) pooled.average[i] = static_cast<double>(sum[i]) / static_cast<double>(count[i]);
  pooled.market_average = traders > 0 ? static_cast<double>(total) / static_cast<double>(traders) : 0.0;
  return pooled;
}

void check_set(std::span<const StrategyKind> set) {
  if (set.empty()) throw std::invalid_argument("strategy set is empty");
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j)
      if (set[i] == set[j]) throw std::invalid_argument("strategy set repeats a kind");
}

}  // namespace

std::vector<TraderPopulation> enumerate_populations(int n_per_side,
                                                    std::span<const StrategyKind> strategy_set,
                                                    std::string* diagnostic) {
  check_set(strategy_set);
  if (n_per_side < static_cast<int>(strategy_set.size())) {
    if (diagnostic)
      *diagnostic = "cannot give each of " + std::to_string(strategy_set.size()) +
                    " kinds a trader with only " + std::to_string(n_per_side) + " per side";
    return {};
  }
  std::vector<std::vector<int>> parts;
  std::vector<int> current;
  compositions(n_per_side, strategy_set.size(), current, parts);

  std::vector<TraderPopulation> out;
  out.reserve(parts.size());
  for (const auto& counts : parts) out.push_back(symmetric_population(strategy_set, counts));
  return out;
}

double p_max(std::span<const StrategyKind> strategy_set) {
  if (strategy_set.empty()) throw std::invalid_argument("p_max of an empty strategy set");
  return 1.0 - 1.0 / static_cast<double>(strategy_set.size());
}

std::vector<StrategyKind> apply_noise(std::span<const StrategyKind> trader_kinds,
                                      const NoiseSpec& noise, Rng& rng) {
  check_set(noise.strategy_set);
  if (!(noise.p >= 0.0) || noise.p > 1.0)
    throw std::invalid_argument("noise probability " + std::to_string(noise.p) +
                                " outside [0, 1]");
  const auto& set = noise.strategy_set;
  for (auto k : trader_kinds)
    if (std::find(set.begin(), set.end(), k) == set.end())
      throw std::invalid_argument("trader kind " + std::string(to_string(k)) +
                                  " is not in the strategy set");

  std::vector<StrategyKind> out(trader_kinds.begin(), trader_kinds.end());
  if (set.size() < 2) return out;
  std::bernoulli_distribution flip(noise.p);
  std::uniform_int_distribution<std::size_t> other(0, set.size() - 2);
  for (auto& k : out) {
    if (!flip(rng)) continue;
    // index into the set with the true kind removed
    std::size_t i = other(rng);
    if (set[i] == k || std::find(set.begin(), set.begin() + static_cast<long>(i), k) !=
                           set.begin() + static_cast<long>(i))
      ++i;
    k = set[i];
  }
  return out;
}

TraderPopulation distort_population(const TraderPopulation& population, const NoiseSpec& noise,
                                    Rng& rng) {
  TraderPopulation observed;
  for (auto side : {Side::bid, Side::ask}) {
    std::vector<StrategyKind> kinds;
    for (auto k : kAllKinds) {
      const int n = side == Side::bid ? population[k].buyers : population[k].sellers;
      kinds.insert(kinds.end(), static_cast<std::size_t>(n), k);
    }
    for (auto k : apply_noise(kinds, noise, rng))
      ++(side == Side::bid ? observed[k].buyers : observed[k].sellers);
  }
  return observed;
}

StrategyKind dominant_kind(const KindAverages& average) {
  std::optional<StrategyKind> best;
  for (auto k : kAllKinds) {
    const auto& v = average[index_of(k)];
    if (v && (!best || *v > *average[index_of(*best)])) best = k;
  }
  if (!best) throw std::invalid_argument("no kind has an average to compare");
  return *best;
}

Prediction predict_dominant(const OrderSchedule& schedule, const TraderPopulation& population,
                            int subtrials, std::uint64_t seed, const SessionConfig& config,
                            bool keep_sessions) {
  if (population.empty()) throw std::invalid_argument("cannot predict on an empty population");
  auto pooled = pool_sessions(schedule, population, subtrials, seed, config, keep_sessions);
  Prediction pred;
  pred.average = pooled.average;
  pred.kind = dominant_kind(pooled.average);
  pred.all_zero = std::all_of(pooled.average.begin(), pooled.average.end(),
                              [](const auto& v) { return !v || *v == 0.0; });
  pred.sessions = std::move(pooled.sessions);
  return pred;
}

std::uint64_t cell_seed(std::uint64_t master, int schedule_id, int population_index, int p_index) {
  return derive_seed({master, static_cast<std::uint64_t>(schedule_id),
                      static_cast<std::uint64_t>(population_index),
                      static_cast<std::uint64_t>(p_index)});
}

std::uint64_t phase_seed(std::uint64_t cell, Phase phase) {
  return derive_seed({cell, static_cast<std::uint64_t>(phase)});
}

ExperimentRecord run_cell(const OrderSchedule& schedule, int schedule_id,
                          const TraderPopulation& population, int population_index, double p,
                          int p_index, const ExperimentSettings& settings) {
  ExperimentRecord r;
  r.schedule_id = schedule_id;
  r.population_index = population_index;
  r.population = population;
  r.p = p;
  r.p_index = p_index;
  r.subtrials = settings.subtrials;
  r.seed = cell_seed(settings.master_seed, schedule_id, population_index, p_index);

  Rng noise_rng(phase_seed(r.seed, Phase::noise));
  r.observed = distort_population(population, NoiseSpec{p, settings.strategy_set}, noise_rng);

  const auto prediction = predict_dominant(schedule, r.observed, settings.subtrials,
                                           phase_seed(r.seed, Phase::prediction), settings.session);
  r.predicted = prediction.kind;
  r.prediction_average = prediction.average;

  TraderPopulation real = population;
  real.add_pair(prediction.kind);
  const auto outcome = pool_sessions(schedule, real, settings.subtrials,
                                     phase_seed(r.seed, Phase::real), settings.session, false);
  r.real_average = outcome.average;
  r.market_average = outcome.market_average;
  r.zero_trade = outcome.trades == 0 || outcome.market_average == 0.0;
  r.multiplier = r.zero_trade ? 0.0 : *outcome.average[index_of(r.predicted)] / outcome.market_average;

  const double best = *outcome.average[index_of(dominant_kind(outcome.average))];
  r.correct = *outcome.average[index_of(r.predicted)] >= best;
  return r;
}

ExperimentOutput experiment2(std::span<const OrderSchedule> schedules,
                             std::span<const TraderPopulation> populations,
                             std::span<const double> p_grid, const ExperimentSettings& settings) {
  check_set(settings.strategy_set);
  const double limit = p_max(settings.strategy_set);
  for (double p : p_grid)
    if (!(p >= 0.0) || p > limit + kProbabilityTolerance)
      throw std::invalid_argument("p grid value " + std::to_string(p) + " outside [0, p_max]");

  struct Cell {
    int schedule;
    int population;
    int p_index;
  };
  std::vector<Cell> cells;
  for (int s = 0; s < static_cast<int>(schedules.size()); ++s)
    for (int i = 0; i < static_cast<int>(populations.size()); ++i)
      for (int j = 0; j < static_cast<int>(p_grid.size()); ++j) cells.push_back(Cell{s, i, j});

  std::vector<std::optional<ExperimentRecord>> slots(cells.size());
  const auto errors = parallel_for(cells.size(), settings.jobs, [&](std::size_t c) {
    const auto& cell = cells[c];
    slots[c] = run_cell(schedules[cell.schedule], cell.schedule, populations[cell.population],
                        cell.population, p_grid[cell.p_index], cell.p_index, settings);
  });

  ExperimentOutput out;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (slots[c]) {
      out.records.push_back(std::move(*slots[c]));
      continue;
    }
    std::string message = "unknown failure";
    try {
      if (errors[c]) std::rethrow_exception(errors[c]);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    out.failures.push_back(CellFailure{cells[c].schedule, cells[c].population, cells[c].p_index,
                                       std::move(message)});
  }
  std::stable_sort(out.records.begin(), out.records.end(), record_order);
  return out;
}

ExperimentOutput experiment1(std::span<const OrderSchedule> schedules,
                             std::span<const TraderPopulation> populations,
                             const ExperimentSettings& settings) {
  constexpr double kNoNoise[] = {0.0};
  return experiment2(schedules, populations, kNoNoise, settings);
}

std::optional<TraderPopulation> population_at(std::span<const StrategyKind> kinds,
                                              std::array<int, 3> grid, int resolution,
                                              int n_per_side) {
  if (kinds.size() != 3) throw std::invalid_argument("the simplex needs exactly three kinds");
  if (resolution < 1 || grid[0] + grid[1] + grid[2] != resolution)
    throw std::invalid_argument("grid point is not on the simplex");

  std::array<int, 3> count{};
  std::array<int, 3> rem{};
  int assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const int num = n_per_side * grid[i];
    count[i] = num / resolution;
    rem[i] = num % resolution;
    assigned += count[i];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rem[a] != rem[b]) return rem[a] > rem[b];
    return kinds[a] < kinds[b];
  });
  for (int left = n_per_side - assigned, j = 0; left > 0; --left, ++j) ++count[order[j]];

  TraderPopulation pop;
  for (std::size_t i = 0; i < 3; ++i) {
    if (grid[i] > 0 && count[i] == 0) return std::nullopt;
    pop[kinds[i]] = SideCounts{count[i], count[i]};
  }
  return pop;
}

std::uint64_t landscape_seed(std::uint64_t master, const TraderPopulation& population) {
  std::uint64_t seed = derive_seed({master, 0x4c414e44});
  for (auto k : kAllKinds)
    seed = derive_seed({seed, static_cast<std::uint64_t>(population[k].buyers),
                        static_cast<std::uint64_t>(population[k].sellers)});
  return seed;
}

std::vector<LandscapePoint> dominance_landscape(const OrderSchedule& schedule,
                                                std::span<const StrategyKind> kinds,
                                                int n_per_side, int resolution,
                                                const ExperimentSettings& settings) {
  check_set(kinds);
  if (kinds.size() != 3) throw std::invalid_argument("the simplex needs exactly three kinds");

  std::vector<LandscapePoint> points;
  for (int i = 0; i <= resolution; ++i)
    for (int j = 0; j <= resolution - i; ++j) {
      const std::array<int, 3> grid{i, j, resolution - i - j};
      if (auto pop = population_at(kinds, grid, resolution, n_per_side)) {
        LandscapePoint pt;
        pt.grid = grid;
        pt.population = *pop;
        points.push_back(pt);
      }
    }

  const auto errors = parallel_for(points.size(), settings.jobs, [&](std::size_t i) {
    auto& pt = points[i];
    const auto pred = predict_dominant(schedule, pt.population, settings.subtrials,
                                       landscape_seed(settings.master_seed, pt.population),
                                       settings.session);
    pt.dominant = pred.kind;
    pt.average = pred.average;
  });
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return points;
}

}  // namespace cdasim
