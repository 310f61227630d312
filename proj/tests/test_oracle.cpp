#include <doctest.h>

#include <algorithm>
#include <map>

#include "cdasim/oracle.hpp"
#include "oracles.hpp"

using namespace cdasim;

namespace {

const std::vector<StrategyKind> kThree{StrategyKind::AA, StrategyKind::GDX, StrategyKind::ZIP};

ExperimentSettings settings(int k, std::uint64_t seed = 7) {
  ExperimentSettings s;
  s.strategy_set = kThree;
  s.subtrials = k;
  s.master_seed = seed;
  s.session.duration = 60;
  return s;
}

}  // namespace

TEST_CASE("population counts") {
  for (int n = 1; n <= 20; ++n)
    for (int k = 1; k <= 5; ++k) {
      const std::vector<StrategyKind> set(kAllKinds.begin(), kAllKinds.begin() + k);
      const auto pops = enumerate_populations(n, set);
      CHECK(pops.size() == oracle::choose(n - 1, k - 1));
      CHECK(pops.size() == oracle::count_compositions(n, k));
    }
  const std::vector<StrategyKind> four{StrategyKind::AA, StrategyKind::GDX, StrategyKind::SNPR,
                                       StrategyKind::ZIP};
  CHECK(enumerate_populations(16, four).size() == 455);
  CHECK(enumerate_populations(12, kThree).size() == 55);
  const std::vector<StrategyKind> two{StrategyKind::AA, StrategyKind::ZIP};
  const auto one = enumerate_populations(2, two);
  REQUIRE(one.size() == 1);
  CHECK(one[0][StrategyKind::AA] == SideCounts{1, 1});
  CHECK(one[0][StrategyKind::ZIP] == SideCounts{1, 1});

  std::string why;
  CHECK(enumerate_populations(2, kThree, &why).empty());
  CHECK_FALSE(why.empty());
}

TEST_CASE("populations are symmetric, positive and ordered") {
  const auto pops = enumerate_populations(12, kThree);
  std::vector<std::vector<int>> keys;
  for (const auto& p : pops) {
    std::vector<int> key;
    for (auto k : kThree) {
      CHECK(p[k].buyers == p[k].sellers);
      CHECK(p[k].buyers >= 1);
      key.push_back(p[k].buyers);
    }
    CHECK(p.buyers() == 12);
    keys.push_back(key);
  }
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
}

TEST_CASE("p_max") {
  CHECK(p_max(std::vector<StrategyKind>(kAllKinds.begin(), kAllKinds.begin() + 4)) == 0.75);
  CHECK(p_max(kThree) == doctest::Approx(2.0 / 3.0));
  CHECK(p_max(std::vector{StrategyKind::AA}) == 0.0);
  CHECK_THROWS_AS(p_max(std::vector<StrategyKind>{}), std::invalid_argument);
}

TEST_CASE("noise") {
  Rng rng(1);
  const std::vector<StrategyKind> two{StrategyKind::AA, StrategyKind::ZIP};
  std::vector<StrategyKind> traders(50, StrategyKind::AA);
  traders.insert(traders.end(), 50, StrategyKind::ZIP);

  CHECK(apply_noise(traders, {0.0, two}, rng) == traders);

  const auto flipped = apply_noise(traders, {1.0, two}, rng);
  REQUIRE(flipped.size() == traders.size());
  for (std::size_t i = 0; i < traders.size(); ++i) CHECK(flipped[i] != traders[i]);

  CHECK_THROWS_AS(apply_noise(traders, {1.5, two}, rng), std::invalid_argument);
  CHECK_THROWS_AS(apply_noise(traders, {-0.1, two}, rng), std::invalid_argument);
  CHECK_THROWS_AS(apply_noise(std::vector{StrategyKind::GDX}, {0.1, two}, rng),
                  std::invalid_argument);

  const std::vector<StrategyKind> many(100000, StrategyKind::GDX);
  const auto out = apply_noise(many, {0.5, kThree}, rng);
  const auto changed = std::count_if(out.begin(), out.end(), [](auto k) { return k != StrategyKind::GDX; });
  CHECK(std::abs(changed / 100000.0 - 0.5) <= 0.01);
  for (auto k : out) CHECK(std::find(kThree.begin(), kThree.end(), k) != kThree.end());
  // the flipped traders split evenly between the two other kinds
  const auto to_aa = std::count(out.begin(), out.end(), StrategyKind::AA);
  CHECK(std::abs(static_cast<double>(to_aa) / static_cast<double>(changed) - 0.5) <= 0.01);
}

TEST_CASE("distorted populations keep their size per side") {
  Rng rng(3);
  const auto pop = enumerate_populations(12, kThree)[20];
  for (int i = 0; i < 50; ++i) {
    const auto d = distort_population(pop, {2.0 / 3.0, kThree}, rng);
    CHECK(d.buyers() == 12);
    CHECK(d.sellers() == 12);
  }
  CHECK(distort_population(pop, {0.0, kThree}, rng) == pop);
}

TEST_CASE("dominant kind") {
  KindAverages avg{};
  avg[index_of(StrategyKind::GDX)] = 5.0;
  avg[index_of(StrategyKind::ZIP)] = 7.0;
  CHECK(dominant_kind(avg) == StrategyKind::ZIP);
  avg[index_of(StrategyKind::GDX)] = 7.0;
  CHECK(dominant_kind(avg) == StrategyKind::GDX);
  for (auto& v : avg)
    if (v) *v *= 3.5;
  CHECK(dominant_kind(avg) == StrategyKind::GDX);
  avg[index_of(StrategyKind::AA)] = 0.0;
  avg[index_of(StrategyKind::GDX)] = 0.0;
  avg[index_of(StrategyKind::ZIP)] = 0.0;
  CHECK(dominant_kind(avg) == StrategyKind::AA);
}

TEST_CASE("prediction pools balances over every subtrial") {
  const auto schedule = symmetric_schedule(50, 150, 60, 30);
  TraderPopulation pop;
  pop[StrategyKind::AA] = {2, 2};
  pop[StrategyKind::GDX] = {1, 1};
  pop[StrategyKind::ZIP] = {3, 3};
  SessionConfig config;
  const auto pred = predict_dominant(schedule, pop, 10, 99, config, true);
  REQUIRE(pred.sessions.size() == 10);
  std::map<StrategyKind, std::pair<long, int>> sums;
  for (const auto& s : pred.sessions)
    for (const auto& t : s.traders) {
      sums[t.kind].first += t.balance;
      ++sums[t.kind].second;
    }
  StrategyKind best = StrategyKind::AA;
  double best_avg = -1;
  for (auto [kind, v] : sums) {
    const double a = static_cast<double>(v.first) / v.second;
    CHECK(pred.average[index_of(kind)] == doctest::Approx(a));
    if (a > best_avg) {
      best_avg = a;
      best = kind;
    }
  }
  CHECK(pred.kind == best);
  CHECK_FALSE(pred.average[index_of(StrategyKind::SNPR)]);

  TraderPopulation solo;
  solo[StrategyKind::GDX] = {3, 3};
  CHECK(predict_dominant(schedule, solo, 2, 1, config).kind == StrategyKind::GDX);
}

TEST_CASE("a single-kind market gives multiplier one") {
  const auto schedule = symmetric_schedule(50, 150, 60, 30);
  auto s = settings(2);
  TraderPopulation pop;
  pop[StrategyKind::ZIP] = {4, 4};
  const auto r = run_cell(schedule, 0, pop, 0, 0.0, 0, s);
  CHECK(r.predicted == StrategyKind::ZIP);
  CHECK_FALSE(r.zero_trade);
  CHECK(r.multiplier == 1.0);
  CHECK(r.correct);
}

TEST_CASE("real phase adds one pair of the predicted kind") {
  const auto schedule = symmetric_schedule(50, 150, 60, 30);
  const auto pop = enumerate_populations(6, kThree)[3];
  const auto r = run_cell(schedule, 2, pop, 3, 0.0, 0, settings(1));
  CHECK(r.population == pop);
  CHECK(r.observed == pop);
  CHECK(r.seed == cell_seed(7, 2, 3, 0));
  if (!r.zero_trade) {
    CHECK(r.multiplier == doctest::Approx(*r.real_average[index_of(r.predicted)] / r.market_average));
  }
}

TEST_CASE("experiment two at zero noise is experiment one") {
  Rng rng(5);
  const std::vector<OrderSchedule> schedules{generate_schedule(SchedulerParams{}, rng)};
  const auto pops = enumerate_populations(4, kThree);
  auto s = settings(2);
  const auto one = experiment1(schedules, pops, s);
  const std::vector<double> grid{0.0};
  const auto two = experiment2(schedules, pops, grid, s);
  CHECK(one.failures.empty());
  CHECK(one.records == two.records);
  CHECK(one.records.size() == pops.size());
  CHECK(std::is_sorted(one.records.begin(), one.records.end(), record_order));

  s.jobs = 3;
  CHECK(experiment1(schedules, pops, s).records == one.records);

  const std::vector<double> bad{0.0, 0.7};
  CHECK_THROWS_AS(experiment2(schedules, pops, bad, s), std::invalid_argument);
}

TEST_CASE("noise grid cells") {
  const std::vector<OrderSchedule> schedules{symmetric_schedule(50, 150, 60, 30)};
  const auto pops = enumerate_populations(3, kThree);
  const std::vector<double> grid{0.0, 1.0 / 3.0, 2.0 / 3.0};
  const auto out = experiment2(schedules, pops, grid, settings(1));
  REQUIRE(out.records.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(out.records[i].p_index == static_cast<int>(i));
    CHECK(out.records[i].p == grid[i]);
    CHECK(out.records[i].observed.buyers() == 3);
  }
}

TEST_CASE("simplex points") {
  auto pop = population_at(kThree, {10, 0, 0}, 10, 12);
  REQUIRE(pop);
  CHECK((*pop)[StrategyKind::AA] == SideCounts{12, 12});
  CHECK(pop->traders(StrategyKind::GDX) == 0);

  pop = population_at(kThree, {5, 3, 2}, 10, 12);
  REQUIRE(pop);
  // 6, 3.6, 2.4 -> 6, 4, 2
  CHECK((*pop)[StrategyKind::AA].buyers == 6);
  CHECK((*pop)[StrategyKind::GDX].buyers == 4);
  CHECK((*pop)[StrategyKind::ZIP].buyers == 2);

  CHECK_FALSE(population_at(kThree, {9, 1, 0}, 10, 4));
  CHECK_THROWS_AS(population_at(kThree, {9, 0, 0}, 10, 4), std::invalid_argument);
}

TEST_CASE("dominance landscape") {
  const auto schedule = symmetric_schedule(50, 150, 60, 30);
  auto s = settings(2);
  const auto points = dominance_landscape(schedule, kThree, 6, 3, s);
  // 10 grid points, all representable with 6 traders per side
  REQUIRE(points.size() == 10);

  std::map<std::array<int, 3>, StrategyKind> by_grid;
  for (const auto& pt : points) {
    by_grid[pt.grid] = pt.dominant;
    const auto direct = predict_dominant(schedule, pt.population, s.subtrials,
                                         landscape_seed(s.master_seed, pt.population), s.session);
    CHECK(pt.dominant == direct.kind);
    CHECK(pt.average == direct.average);
  }
  CHECK(by_grid.at({3, 0, 0}) == StrategyKind::AA);
  CHECK(by_grid.at({0, 3, 0}) == StrategyKind::GDX);
  CHECK(by_grid.at({0, 0, 3}) == StrategyKind::ZIP);

  // relabel: list the kinds in another order, then map the grid back
  const std::vector<StrategyKind> rotated{StrategyKind::ZIP, StrategyKind::AA, StrategyKind::GDX};
  for (const auto& pt : dominance_landscape(schedule, rotated, 6, 3, s)) {
    const std::array<int, 3> back{pt.grid[1], pt.grid[2], pt.grid[0]};
    CHECK(by_grid.at(back) == pt.dominant);
  }

  CHECK_THROWS_AS(dominance_landscape(schedule, std::vector{StrategyKind::AA, StrategyKind::ZIP},
                                      6, 3, s),
                  std::invalid_argument);
}

TEST_CASE("seed derivation") {
  CHECK(cell_seed(1, 0, 0, 0) != cell_seed(1, 0, 0, 1));
  CHECK(cell_seed(1, 0, 1, 0) != cell_seed(1, 1, 0, 0));
  CHECK(phase_seed(5, Phase::noise) != phase_seed(5, Phase::real));
  CHECK(cell_seed(3, 2, 1, 0) == cell_seed(3, 2, 1, 0));
}
