#include <doctest.h>

#include <map>
#include <nlohmann/json.hpp>

#include "cdasim/schedules.hpp"
#include "oracles.hpp"

using namespace cdasim;

TEST_CASE("generated schedules tile the session") {
  const SchedulerParams params;
  Rng rng(5);
  std::map<std::size_t, int> counts;
  for (int i = 0; i < 10000; ++i) {
    const auto s = generate_schedule(params, rng);
    REQUIRE_NOTHROW(s.validate());
    CHECK(s.duration() == 240);
    REQUIRE(s.supply.size() == s.demand.size());
    CHECK(s.supply.size() <= 8);
    ++counts[s.supply.size()];
    for (std::size_t k = 0; k < s.supply.size(); ++k) {
      CHECK(s.supply[k].from == s.demand[k].from);
      CHECK(s.supply[k].to == s.demand[k].to);
    }
  }
  // sub-schedule count is uniform on 1..8: chi-square, 7 dof, 0.1% critical value 24.3
  double chi = 0;
  for (int c = 1; c <= 8; ++c) {
    const double d = counts[static_cast<std::size_t>(c)] - 10000.0 / 8;
    chi += d * d / (10000.0 / 8);
  }
  CHECK(chi < 24.3);
}

TEST_CASE("sub-schedule bounds") {
  CHECK(sub_schedule_range(100, 40, 60) == std::pair<Price, Price>{80, 200});
  CHECK(sub_schedule_range(100, -40, 60) == std::pair<Price, Price>{1, 120});

  SchedulerParams flat;
  flat.max_volatility = 0;
  flat.max_change = 0;
  Rng rng(2);
  for (int i = 0; i < 50; ++i)
    for (const auto& sub : generate_schedule(flat, rng).supply) {
      CHECK(sub.low == 100);
      CHECK(sub.high == 100);
    }
}

TEST_CASE("order prices") {
  Rng rng(1);
  CHECK(order_prices({0, 30, 50, 150, StepMode::fixed}, 2, Side::ask, rng) ==
        std::vector<Price>{50, 150});
  CHECK(order_prices({0, 30, 60, 140, StepMode::fixed}, 5, Side::ask, rng) ==
        std::vector<Price>{60, 80, 100, 120, 140});
  CHECK(order_prices({0, 30, 60, 140, StepMode::fixed}, 5, Side::bid, rng) ==
        std::vector<Price>{140, 120, 100, 80, 60});
  for (auto p : order_prices({0, 30, 100, 100, StepMode::random}, 7, Side::ask, rng)) CHECK(p == 100);
  for (auto mode : {StepMode::jittered, StepMode::random})
    for (int i = 0; i < 200; ++i)
      for (auto p : order_prices({0, 30, 37, 81, mode}, 9, Side::bid, rng)) {
        CHECK(p >= 37);
        CHECK(p <= 81);
      }
}

TEST_CASE("deployment times") {
  Rng rng(3);
  CHECK(deployment_times(TimeMode::periodic, 30, 30, 4, rng) == std::vector<Timestep>{30, 30, 30, 30});
  CHECK(deployment_times(TimeMode::drip_fixed, 0, 30, 3, rng) == std::vector<Timestep>{0, 10, 20});
  for (auto mode : {TimeMode::drip_jittered, TimeMode::drip_poisson})
    for (int i = 0; i < 500; ++i)
      for (auto t : deployment_times(mode, 60, 30, 12, rng)) {
        CHECK(t >= 60);
        CHECK(t < 90);
      }
}

TEST_CASE("equilibrium") {
  const std::vector<Price> even{50, 60, 70, 80, 90, 100, 110, 120, 130, 140, 150};
  const std::vector<Price> down(even.rbegin(), even.rend());
  auto eq = equilibrium(even, down);
  CHECK(eq.quantity == 6);
  REQUIRE(eq.price_range);
  CHECK(eq.price_range->first <= 100);
  CHECK(eq.price_range->second >= 100);

  eq = equilibrium(std::vector<Price>{100}, std::vector<Price>{90});
  CHECK(eq.quantity == 0);
  CHECK_FALSE(eq.price_range);

  eq = equilibrium(std::vector<Price>{10, 20, 30}, std::vector<Price>{35, 25, 15});
  CHECK(eq.quantity == 2);
  CHECK(eq.price_range == std::pair<Price, Price>{20, 25});
  CHECK(eq.surplus == 30);
}

TEST_CASE("equilibrium matches brute force") {
  Rng rng(9);
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_int_distribution<int> price(1, 200);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<int> s(static_cast<std::size_t>(len(rng))), d(static_cast<std::size_t>(len(rng)));
    for (auto& v : s) v = price(rng);
    for (auto& v : d) v = price(rng);
    const auto want = oracle::brute_equilibrium(s, d);
    const auto got = equilibrium(s, d);
    CHECK(got.surplus == want.surplus);
    if (got.quantity > 0) {
      // every price in the range clears: supply at or below it, demand at or above
      const auto [lo, hi] = *got.price_range;
      CHECK(lo <= hi);
      for (int p : {lo, hi}) {
        const auto sellers = std::count_if(s.begin(), s.end(), [&](int v) { return v <= p; });
        const auto buyers = std::count_if(d.begin(), d.end(), [&](int v) { return v >= p; });
        CHECK(sellers >= got.quantity);
        CHECK(buyers >= got.quantity);
      }
    }
  }
}

TEST_CASE("schedule json round trip") {
  Rng rng(4);
  const auto s = generate_schedule(SchedulerParams{}, rng);
  CHECK(schedule_from_json(schedule_to_json(s)) == s);
  CHECK_THROWS_AS(schedule_from_json(R"({"timemode":"periodic","interval":30,"supply":[],"demand":[]})"),
                  std::invalid_argument);
}

TEST_CASE("scheduler parameter validation") {
  SchedulerParams p;
  p.duration = 250;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.duration = 330;
  CHECK_NOTHROW(p.validate());
}
