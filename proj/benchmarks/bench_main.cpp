#include <benchmark/benchmark.h>

#include <random>

#include "cdasim/oracle.hpp"
#include "cdasim/session.hpp"
#include "cdasim/stats.hpp"
#include "cdasim/strategies.hpp"

using namespace cdasim;

static void BM_BookSubmit(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> trader(0, 63);
  std::uniform_int_distribution<int> price(80, 120);
  LimitOrderBook book;
  Timestep t = 0;
  for (auto _ : state) {
    const TraderId id = trader(rng);
    benchmark::DoNotOptimize(book.submit(id, id < 32 ? Side::bid : Side::ask, price(rng), t++));
  }
}
BENCHMARK(BM_BookSubmit);

static void BM_GdxQuote(benchmark::State& state) {
  GdxStrategy gdx(Side::bid, GdxParams{});
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> price(60, 140);
  for (int i = 0; i < 40; ++i) {
    const Side s = i % 2 ? Side::bid : Side::ask;
    gdx.on_market_event({i % 5 ? TapeEventType::quote : TapeEventType::trade, i, s, price(rng), {}},
                        std::nullopt);
  }
  const BookSnapshot book{95, 105, 4, 4};
  const int horizon = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gdx.best_price(130, book, horizon));
}
BENCHMARK(BM_GdxQuote)->Arg(1)->Arg(10);

static void BM_Session(benchmark::State& state) {
  Rng rng(3);
  const auto schedule = generate_schedule(SchedulerParams{}, rng);
  TraderPopulation pop;
  for (auto k : {StrategyKind::AA, StrategyKind::GDX, StrategyKind::ZIP}) pop[k] = {4, 4};
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_session(schedule, pop, SessionConfig{}, ++seed));
}
BENCHMARK(BM_Session)->Unit(benchmark::kMillisecond);

static void BM_RankSumExact(benchmark::State& state) {
  const std::vector<double> a{1, 4, 4, 7, 9, 12}, b{2, 3, 5, 8, 10, 11};
  for (auto _ : state) benchmark::DoNotOptimize(stats::rank_sum_test(a, b));
}
BENCHMARK(BM_RankSumExact);
BENCHMARK_MAIN();
