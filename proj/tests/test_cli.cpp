#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

using namespace cdasim;
using namespace cdasim::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("cdasim_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json small_config(const fs::path& out) {
  return {{"seed", 3},
          {"strategies", {"AA", "GDX", "ZIP"}},
          {"n_per_side", 4},
          {"K", 1},
          {"schedules", "simple"},
          {"duration", 60},
          {"p_levels", 2},
          {"output_dir", out.string()}};
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(CDASIM_TOOL) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(nlohmann::json::object());
  CHECK(c.seed == 1);
  CHECK(c.strategies.size() == 4);
  CHECK(noise_grid(c).size() == 14);
  CHECK(noise_grid(c).back() == doctest::Approx(0.75));

  auto doc = small_config("x");
  doc["strategy_params"] = {{"ZIC", {{"ceiling", 200}}}, {"GDX", {{"gamma", 0.5}}}};
  doc["population"] = {{"AA", 2}, {"ZIP", {1, 3}}};
  const auto d = parse_config(doc);
  CHECK(d.params.zic.ceiling == 200);
  CHECK(d.params.gdx.gamma == 0.5);
  CHECK(d.population.at(StrategyKind::ZIP) == SideCounts{1, 3});
  REQUIRE(noise_grid(d).size() == 2);
  CHECK(noise_grid(d)[1] == doctest::Approx(2.0 / 3.0));

  CHECK_THROWS_AS(parse_config({{"strategies", {"AA", "XYZ"}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"strategies", {"AA", "ZIP"}}, {"p_grid", {0.0, 0.6}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"scheduler", {{"duration", 250}, {"interval", 30}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"K", 0}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"n_per_side", "many"}}), ConfigError);
}

TEST_CASE("gen-schedules is reproducible") {
  const auto dir = scratch("gen");
  auto doc = small_config(dir / "a");
  doc["schedules"] = "generated";
  doc["schedule_count"] = 5;
  std::ostringstream log;
  CHECK(cmd_gen_schedules(parse_config(doc), log) == kOk);
  doc["output_dir"] = (dir / "b").string();
  CHECK(cmd_gen_schedules(parse_config(doc), log) == kOk);
  for (int i = 0; i < 5; ++i) {
    const auto name = "schedule_000" + std::to_string(i) + ".json";
    const auto a = slurp(dir / "a" / "schedules" / name);
    CHECK(!a.empty());
    CHECK(a == slurp(dir / "b" / "schedules" / name));
    CHECK(schedule_from_json(a).duration() == 240);
  }
  CHECK(slurp(dir / "a/schedules/manifest.json") == slurp(dir / "b/schedules/manifest.json"));

  // a manifest can drive an experiment
  doc["schedules"] = (dir / "a/schedules/manifest.json").string();
  const auto c = parse_config(doc);
  const auto loaded = load_schedules(c);
  REQUIRE(loaded.size() == 5);
  CHECK(loaded[3].first == 3);
  CHECK(loaded[3].second == generated_schedule(c, 3));

  doc["schedule_count"] = 0;
  doc["schedules"] = "generated";
  doc["output_dir"] = (dir / "c").string();
  CHECK(cmd_gen_schedules(parse_config(doc), log) == kOk);
  const auto manifest = nlohmann::json::parse(slurp(dir / "c/schedules/manifest.json"));
  CHECK(manifest.at("schedules").empty());
}

TEST_CASE("experiments write sorted, repeatable outputs") {
  const auto dir = scratch("exp");
  std::ostringstream log;
  auto doc = small_config(dir / "one");
  CHECK(cmd_experiment(parse_config(doc), Experiment::exp1, log) == kOk);
  CHECK(cmd_experiment(parse_config(doc), Experiment::exp2, log) == kOk);
  doc["jobs"] = 3;
  doc["output_dir"] = (dir / "two").string();
  CHECK(cmd_experiment(parse_config(doc), Experiment::exp2, log) == kOk);
  for (const char* f : {"records.csv", "summary.csv", "fits.csv", "plot_data.csv", "failures.csv"})
    CHECK(slurp(dir / "one/experiment2" / f) == slurp(dir / "two/experiment2" / f));

  std::ifstream in(dir / "one/experiment1/records.csv");
  const auto exp1 = read_records_csv(in);
  CHECK(exp1.records.size() == 3);  // C(3, 2) populations
  std::ifstream in2(dir / "one/experiment2/records.csv");
  const auto exp2 = read_records_csv(in2);
  CHECK(exp2.records.size() == 6);
  for (const auto& r : exp2.records) CHECK(r.p_index <= 1);

  // p grid {0} reproduces experiment one
  doc["p_grid"] = {0.0};
  doc["output_dir"] = (dir / "zero").string();
  CHECK(cmd_experiment(parse_config(doc), Experiment::exp2, log) == kOk);
  CHECK(slurp(dir / "zero/experiment2/records.csv") == slurp(dir / "one/experiment1/records.csv"));
}

TEST_CASE("analyze is a function of the records file") {
  const auto dir = scratch("analyze");
  std::ostringstream log;
  auto doc = small_config(dir);
  CHECK(cmd_experiment(parse_config(doc), Experiment::exp2, log) == kOk);
  const auto records = dir / "experiment2/records.csv";
  CHECK(cmd_analyze(records, dir / "again", log) == kOk);
  for (const char* f : {"summary.csv", "fits.csv", "plot_data.csv"})
    CHECK(slurp(dir / "again" / f) == slurp(dir / "experiment2" / f));

  {
    std::ofstream header_only(dir / "empty.csv");
    header_only << slurp(records).substr(0, slurp(records).find('\n') + 1);
  }
  CHECK(cmd_analyze(dir / "empty.csv", dir / "empty", log) == kOk);
  CHECK(slurp(dir / "empty/fits.csv") == "schedule_id,series,slope,intercept,residual_sum\n");

  {
    std::ofstream bad(dir / "bad.csv");
    bad << "schedule_id,whatever\n1,2\n";
  }
  CHECK_THROWS_AS(cmd_analyze(dir / "bad.csv", dir / "bad", log), ConfigError);
}

TEST_CASE("landscape and session commands") {
  const auto dir = scratch("land");
  std::ostringstream log;
  auto doc = small_config(dir);
  doc["landscape"] = {{"resolution", 2}};
  CHECK(cmd_experiment(parse_config(doc), Experiment::landscape, log) == kOk);
  const auto text = slurp(dir / "landscape/landscape.csv");
  CHECK(text.rfind("schedule_id,grid_a,grid_b,grid_c,n_AA,n_GDX,n_ZIP,dominant", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);

  CHECK(cmd_run_session(parse_config(doc), log) == kOk);
  CHECK(slurp(dir / "session/tape.csv").rfind("timestep,event_type,price,buyer_id,seller_id\n", 0) == 0);
  const auto traders = slurp(dir / "session/traders.csv");
  CHECK(std::count(traders.begin(), traders.end(), '\n') == 1 + 8);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("exit");
  {
    std::ofstream cfg(dir / "bad.json");
    cfg << R"({"strategies": ["AA", "NOPE"]})";
  }
  {
    std::ofstream cfg(dir / "ok.json");
    cfg << small_config(dir / "out").dump();
  }
  CHECK(run_tool("--config " + (dir / "bad.json").string() + " experiment1") == 1);
  CHECK(run_tool("--config " + (dir / "ok.json").string() + " experiment1") == 0);
  CHECK(run_tool("--config " + (dir / "ok.json").string() + " --seed 9 --jobs 2 experiment2") == 0);
  CHECK(fs::exists(dir / "out/experiment2/records.csv"));
  CHECK(run_tool("--config " + (dir / "ok.json").string() + " analyze " +
                 (dir / "out/experiment2/records.csv").string()) == 0);
  CHECK(fs::exists(dir / "out/analysis/summary.csv"));
  CHECK(run_tool("--out " + (dir / "gen").string() + " gen-schedules") == 0);
  CHECK(fs::exists(dir / "gen/schedules/schedule_0099.json"));
}
