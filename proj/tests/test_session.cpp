#include <doctest.h>

#include <set>

#include "cdasim/session.hpp"

using namespace cdasim;

namespace {

TraderPopulation one_kind(StrategyKind k, int n) {
  TraderPopulation pop;
  pop[k] = {n, n};
  return pop;
}

}  // namespace

TEST_CASE("no pending orders means no activity") {
  const auto schedule = symmetric_schedule(50, 150, 240, 30);
  SessionConfig config;
  config.auto_deploy = false;
  const auto traders = expand(one_kind(StrategyKind::ZIC, 3));
  Session session(schedule, traders, config, 1);
  for (Timestep t = 0; t < 50; ++t) CHECK(session.step(t).empty());
  const auto r = session.result();
  CHECK(r.trade_count == 0);
  for (const auto& t : r.traders) CHECK(t.quotes == 0);
}

TEST_CASE("one ZIC buyer and one ZIC seller trade exactly once") {
  const auto schedule = symmetric_schedule(50, 150, 240, 30);
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    SessionConfig config;
    config.auto_deploy = false;
    config.record_tape = true;
    const auto traders = expand(one_kind(StrategyKind::ZIC, 1));
    Session session(schedule, traders, config, seed);
    session.deploy(0, {Side::bid, 150, 0});
    session.deploy(1, {Side::ask, 50, 0});
    session.run();
    const auto r = session.result();
    REQUIRE(r.trade_count == 1);
    for (const auto& e : r.tape->entries())
      if (e.type == TapeEventType::trade) {
        CHECK(e.price >= 50);
        CHECK(e.price <= 150);
      }
    CHECK(r.traders[0].balance + r.traders[1].balance == 100);
  }
}

TEST_CASE("240 steps with interval 30 deploy orders eight times") {
  const auto schedule = symmetric_schedule(50, 150, 240, 30);
  const auto traders = expand(one_kind(StrategyKind::ZIC, 4));
  Session session(schedule, traders, SessionConfig{}, 3);
  std::set<Timestep> issued;
  for (Timestep t = 0; t < 240; ++t) {
    session.step(t);
    for (const auto& s : session.traders())
      if (s.pending) issued.insert(s.pending->issued);
  }
  CHECK(issued == std::set<Timestep>{0, 30, 60, 90, 120, 150, 180, 210});
  CHECK(session.done());
  CHECK_THROWS_AS(session.step(240), std::logic_error);
}

TEST_CASE("sessions are deterministic in their seed") {
  Rng rng(8);
  const auto schedule = generate_schedule(SchedulerParams{}, rng);
  TraderPopulation pop;
  pop[StrategyKind::AA] = {2, 2};
  pop[StrategyKind::GDX] = {2, 2};
  pop[StrategyKind::ZIP] = {2, 2};
  pop[StrategyKind::SNPR] = {1, 1};
  SessionConfig config;
  config.record_tape = true;
  const auto a = run_session(schedule, pop, config, 42);
  const auto b = run_session(schedule, pop, config, 42);
  CHECK(a == b);
  const auto c = run_session(schedule, pop, config, 43);
  CHECK_FALSE(*a.tape == *c.tape);
}

TEST_CASE("all-ZIC market") {
  const auto schedule = symmetric_schedule(50, 150, 240, 30);
  SessionConfig config;
  config.record_tape = true;
  const auto r = run_session(schedule, one_kind(StrategyKind::ZIC, 8), config, 5);
  CHECK(r.trade_count > 0);
  CHECK(*r.kind_average()[index_of(StrategyKind::ZIC)] > 0.0);
  for (const auto& e : r.tape->entries())
    if (e.type == TapeEventType::trade) {
      CHECK(e.price >= 50);
      CHECK(e.price <= 150);
    }
  CHECK(r.buyer_payments == r.seller_receipts);
  CHECK(r.total_profit() <= r.theoretical_surplus);
  CHECK(*r.efficiency() <= 1.0);
}

TEST_CASE("single-kind market average equals the kind average") {
  const auto schedule = symmetric_schedule(50, 150, 240, 30);
  for (auto kind : kAllKinds) {
    const auto r = run_session(schedule, one_kind(kind, 3), SessionConfig{}, 11);
    const auto avg = r.kind_average();
    CHECK(avg[index_of(kind)] == r.market_average());
    for (auto other : kAllKinds)
      if (other != kind) CHECK_FALSE(avg[index_of(other)]);
  }
}

TEST_CASE("quotes are only accepted from traders holding an order") {
  const auto schedule = symmetric_schedule(50, 150, 240, 30);
  SessionConfig config;
  config.auto_deploy = false;
  const auto traders = expand(one_kind(StrategyKind::ZIC, 1));
  Session session(schedule, traders, config, 1);
  CHECK(session.submit_quote(0, Side::bid, 100).status == SubmitStatus::rejected);
  session.deploy(0, {Side::bid, 120, 0});
  CHECK(session.submit_quote(0, Side::ask, 100).status == SubmitStatus::rejected);
  CHECK(session.submit_quote(0, Side::bid, 130).status == SubmitStatus::rejected);
  CHECK(session.submit_quote(0, Side::bid, 100).status == SubmitStatus::rested);
}

TEST_CASE("population expansion order") {
  TraderPopulation pop;
  pop[StrategyKind::ZIP] = {1, 2};
  pop[StrategyKind::AA] = {1, 1};
  const auto specs = expand(pop);
  REQUIRE(specs.size() == 5);
  CHECK(specs[0].kind == StrategyKind::AA);
  CHECK(specs[0].side == Side::bid);
  CHECK(specs[1].kind == StrategyKind::ZIP);
  CHECK(specs[2].side == Side::ask);
  CHECK(specs[4].kind == StrategyKind::ZIP);
  CHECK(pop.key(std::vector{StrategyKind::AA, StrategyKind::ZIP}) == "1:1-1:2");
  CHECK(symmetric_population(std::vector{StrategyKind::AA, StrategyKind::ZIP}, std::vector{4, 2})
            .key(std::vector{StrategyKind::AA, StrategyKind::ZIP}) == "4-2");
}
