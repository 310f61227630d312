#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cdasim/seed.hpp"
#include "cdasim/stats.hpp"

namespace cdasim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kScheduleStream = 0x5343484544ULL;

StrategyKind kind_from(const std::string& name) {
  const auto k = parse_kind(name);
  if (!k) throw ConfigError("unknown strategy '" + name + "' (expected AA, GDX, SNPR, ZIC or ZIP)");
  return *k;
}

std::vector<StrategyKind> kinds_from(const json& j) {
  std::vector<StrategyKind> out;
  for (const auto& v : j) out.push_back(kind_from(v.get<std::string>()));
  std::vector<StrategyKind> sorted = out;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ConfigError("strategy list repeats a kind");
  return sorted;
}

template <class T>
void take(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

void read_params(const json& j, StrategyParams& p) {
  if (j.contains("ZIC")) {
    const auto& z = j.at("ZIC");
    take(z, "floor", p.zic.floor);
    take(z, "ceiling", p.zic.ceiling);
  }
  if (j.contains("ZIP")) {
    const auto& z = j.at("ZIP");
    take(z, "beta_min", p.zip.beta_min);
    take(z, "beta_max", p.zip.beta_max);
    take(z, "momentum_max", p.zip.momentum_max);
    take(z, "ca", p.zip.ca);
    take(z, "cr", p.zip.cr);
    take(z, "margin_min", p.zip.margin_min);
    take(z, "margin_max", p.zip.margin_max);
  }
  if (j.contains("SNPR")) {
    const auto& s = j.at("SNPR");
    take(s, "lurk_fraction", p.snpr.lurk_fraction);
    take(s, "shave_growth", p.snpr.shave_growth);
    take(s, "snipe_spread", p.snpr.snipe_spread);
    take(s, "min_profit", p.snpr.min_profit);
  }
  if (j.contains("GDX")) {
    const auto& g = j.at("GDX");
    take(g, "gamma", p.gdx.gamma);
    take(g, "horizon", p.gdx.horizon);
    take(g, "memory_trades", p.gdx.memory_trades);
  }
  if (j.contains("AA")) {
    const auto& a = j.at("AA");
    take(a, "lambda_r", p.aa.lambda_r);
    take(a, "lambda_a", p.aa.lambda_a);
    take(a, "beta1_min", p.aa.beta1_min);
    take(a, "beta1_max", p.aa.beta1_max);
    take(a, "beta2_min", p.aa.beta2_min);
    take(a, "beta2_max", p.aa.beta2_max);
    take(a, "eq_window", p.aa.eq_window);
    take(a, "eq_decay", p.aa.eq_decay);
    take(a, "eta", p.aa.eta);
    take(a, "theta_init", p.aa.theta_init);
    take(a, "theta_min", p.aa.theta_min);
    take(a, "theta_max", p.aa.theta_max);
    take(a, "gamma", p.aa.gamma);
    take(a, "initial_r_max", p.aa.initial_r_max);
    take(a, "initial_margin", p.aa.initial_margin);
  }
}

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string schedule_file(int id) {
  std::ostringstream ss;
  ss << "schedule_" << std::setw(4) << std::setfill('0') << id << ".json";
  return ss.str();
}

void write_analysis(const std::vector<ExperimentRecord>& records, const fs::path& dir) {
  const auto analysis = stats::analyze(records);
  auto summary = open_out(dir / "summary.csv");
  stats::write_summary_csv(summary, analysis);
  auto fits = open_out(dir / "fits.csv");
  stats::write_fits_csv(fits, analysis);
  auto plot = open_out(dir / "plot_data.csv");
  stats::write_plot_csv(plot, analysis);
}

int failure_exit(std::size_t failures, std::size_t cells, double threshold, std::ostream& log) {
  if (failures == 0) return kOk;
  const double share = cells ? static_cast<double>(failures) / static_cast<double>(cells) : 1.0;
  log << failures << " of " << cells << " cells failed (see failures.csv)\n";
  return share > threshold ? kCellFailures : kOk;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  RunConfig c;
  try {
    take(doc, "seed", c.seed);
    if (doc.contains("scheduler")) c.scheduler = doc.at("scheduler").get<SchedulerParams>();
    if (doc.contains("strategies")) c.strategies = kinds_from(doc.at("strategies"));
    if (doc.contains("strategy_params")) read_params(doc.at("strategy_params"), c.params);
    take(doc, "n_per_side", c.n_per_side);
    take(doc, "p_grid", c.p_grid);
    take(doc, "p_levels", c.p_levels);
    take(doc, "K", c.subtrials);
    take(doc, "schedule_count", c.schedule_count);
    take(doc, "schedules", c.schedules);
    if (doc.contains("simple")) {
      take(doc.at("simple"), "low", c.simple_low);
      take(doc.at("simple"), "high", c.simple_high);
    }
    take(doc, "duration", c.duration);
    if (doc.contains("landscape")) {
      const auto& l = doc.at("landscape");
      if (l.contains("kinds")) c.landscape_kinds = kinds_from(l.at("kinds"));
      take(l, "resolution", c.landscape_resolution);
    }
    if (doc.contains("population"))
      for (const auto& [name, v] : doc.at("population").items()) {
        const auto k = kind_from(name);
        c.population[k] = v.is_array() ? SideCounts{v.at(0).get<int>(), v.at(1).get<int>()}
                                       : SideCounts{v.get<int>(), v.get<int>()};
      }
    take(doc, "failure_threshold", c.failure_threshold);
    if (doc.contains("output_dir")) c.output_dir = doc.at("output_dir").get<std::string>();
    take(doc, "jobs", c.jobs);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.landscape_kinds.empty())
    c.landscape_kinds.assign(c.strategies.begin(),
                             c.strategies.begin() + std::min<std::size_t>(3, c.strategies.size()));
  validate(c);
  return c;
}

RunConfig load_config(const fs::path& path) {
  const auto text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

void validate(const RunConfig& c) {
  try {
    c.scheduler.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scheduler: ") + e.what());
  }
  if (c.strategies.empty()) throw ConfigError("strategy set is empty");
  if (c.n_per_side < 1) throw ConfigError("n_per_side must be positive");
  if (c.subtrials < 1) throw ConfigError("K must be at least 1");
  if (c.schedule_count < 0) throw ConfigError("schedule_count must not be negative");
  if (c.p_levels < 1 && c.p_grid.empty()) throw ConfigError("p_levels must be at least 1");
  if (c.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (c.duration < 0) throw ConfigError("duration must not be negative");
  if (!(c.failure_threshold >= 0.0 && c.failure_threshold <= 1.0))
    throw ConfigError("failure_threshold must lie in [0, 1]");
  const double pm = p_max(c.strategies);
  for (double p : c.p_grid)
    if (!(p >= 0.0) || p > pm + 1e-12)
      throw ConfigError("p grid value " + format_double(p) + " outside [0, " + format_double(pm) + "]");
  if (c.schedules == "simple" &&
      (!is_valid_price(c.simple_low) || !is_valid_price(c.simple_high) ||
       c.simple_low > c.simple_high))
    throw ConfigError("simple schedule needs 1 <= low <= high <= 1000");
  if (c.landscape_resolution < 1) throw ConfigError("landscape resolution must be positive");
  const auto& l = c.landscape_kinds;
  for (auto k : l)
    if (std::find(c.strategies.begin(), c.strategies.end(), k) == c.strategies.end())
      throw ConfigError("landscape kind " + std::string(to_string(k)) + " is not in the strategy set");
}

std::vector<double> noise_grid(const RunConfig& c) {
  if (!c.p_grid.empty()) return c.p_grid;
  const double pm = p_max(c.strategies);
  if (c.p_levels == 1) return {0.0};
  std::vector<double> grid;
  for (int i = 0; i < c.p_levels; ++i) grid.push_back(pm * i / (c.p_levels - 1));
  return grid;
}

OrderSchedule generated_schedule(const RunConfig& c, int id) {
  Rng rng(derive_seed({c.seed, kScheduleStream, static_cast<std::uint64_t>(id)}));
  return generate_schedule(c.scheduler, rng);
}

std::vector<std::pair<int, OrderSchedule>> load_schedules(const RunConfig& c) {
  std::vector<std::pair<int, OrderSchedule>> out;
  if (c.schedules == "generated") {
    for (int i = 0; i < c.schedule_count; ++i) out.emplace_back(i, generated_schedule(c, i));
  } else if (c.schedules == "simple") {
    out.emplace_back(0, symmetric_schedule(c.simple_low, c.simple_high, c.scheduler.duration,
                                           c.scheduler.interval));
  } else {
    const fs::path manifest(c.schedules);
    json doc;
    try {
      doc = json::parse(read_file(manifest));
      for (const auto& entry : doc.at("schedules")) {
        const auto file = manifest.parent_path() / entry.at("file").get<std::string>();
        out.emplace_back(entry.at("id").get<int>(), schedule_from_json(read_file(file)));
      }
    } catch (const json::exception& e) {
      throw ConfigError(manifest.string() + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(manifest.string() + ": " + e.what());
    }
  }
  for (const auto& [id, s] : out)
    if (c.duration > s.duration())
      throw ConfigError("duration " + std::to_string(c.duration) + " exceeds schedule " +
                        std::to_string(id) + " (" + std::to_string(s.duration()) + " timesteps)");
  return out;
}

ExperimentSettings settings_for(const RunConfig& c) {
  ExperimentSettings s;
  s.strategy_set = c.strategies;
  s.session.duration = c.duration;
  s.session.params = c.params;
  s.subtrials = c.subtrials;
  s.master_seed = c.seed;
  s.jobs = c.jobs;
  return s;
}

int cmd_gen_schedules(const RunConfig& c, std::ostream& log) {
  const auto dir = c.output_dir / "schedules";
  fs::create_directories(dir);
  json manifest{{"seed", c.seed}, {"scheduler", c.scheduler}, {"schedules", json::array()}};
  for (int i = 0; i < c.schedule_count; ++i) {
    const auto name = schedule_file(i);
    auto out = open_out(dir / name);
    out << schedule_to_json(generated_schedule(c, i));
    manifest["schedules"].push_back({{"id", i}, {"file", name}});
  }
  auto out = open_out(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
  log << "wrote " << c.schedule_count << " schedules to " << dir.string() << '\n';
  return kOk;
}

int cmd_run_session(const RunConfig& c, std::ostream& log) {
  const auto schedules = load_schedules(c);
  if (schedules.empty()) throw ConfigError("no schedule to run");
  TraderPopulation pop;
  if (c.population.empty()) {
    const int n = static_cast<int>(c.strategies.size());
    for (int i = 0; i < n; ++i) {
      const int share = c.n_per_side / n + (i < c.n_per_side % n ? 1 : 0);
      pop[c.strategies[static_cast<std::size_t>(i)]] = SideCounts{share, share};
    }
  } else {
    for (const auto& [k, counts] : c.population) pop[k] = counts;
  }
  if (pop.empty()) throw ConfigError("population is empty");

  SessionConfig sc;
  sc.duration = c.duration;
  sc.params = c.params;
  sc.record_tape = true;
  const auto result = run_session(schedules.front().second, pop, sc, derive_seed({c.seed}));

  const auto dir = c.output_dir / "session";
  auto tape = open_out(dir / "tape.csv");
  result.tape->write_csv(tape);
  auto traders = open_out(dir / "traders.csv");
  traders << "trader_id,kind,side,balance,trades,polls,quotes\n";
  for (const auto& t : result.traders)
    traders << t.id << ',' << to_string(t.kind) << ',' << to_string(t.side) << ',' << t.balance
            << ',' << t.trades << ',' << t.polls << ',' << t.quotes << '\n';

  log << "trades: " << result.trade_count << ", total profit: " << result.total_profit()
      << ", theoretical surplus: " << result.theoretical_surplus;
  if (const auto e = result.efficiency()) log << ", efficiency: " << format_double(*e, 4);
  log << '\n';
  return kOk;
}

int cmd_experiment(const RunConfig& c, Experiment which, std::ostream& log) {
  const auto loaded = load_schedules(c);
  const auto settings = settings_for(c);

  if (which == Experiment::landscape) {
    if (c.landscape_kinds.size() != 3) throw ConfigError("landscape needs exactly three kinds");
    const auto dir = c.output_dir / "landscape";
    auto out = open_out(dir / "landscape.csv");
    const auto& kinds = c.landscape_kinds;
    out << "schedule_id";
    for (const char* g : {"grid_a", "grid_b", "grid_c"}) out << ',' << g;
    for (auto k : kinds) out << ",n_" << to_string(k);
    out << ",dominant";
    for (auto k : kinds) out << ",avg_" << to_string(k);
    out << '\n';
    for (const auto& [id, schedule] : loaded) {
      const auto points =
          dominance_landscape(schedule, kinds, c.n_per_side, c.landscape_resolution, settings);
      for (const auto& pt : points) {
        out << id << ',' << pt.grid[0] << ',' << pt.grid[1] << ',' << pt.grid[2];
        for (auto k : kinds) out << ',' << pt.population[k].buyers;
        out << ',' << to_string(pt.dominant);
        for (auto k : kinds) {
          const auto& v = pt.average[index_of(k)];
          out << ',' << (v ? format_double(*v) : std::string{});
        }
        out << '\n';
      }
    }
    log << "landscape over " << loaded.size() << " schedule(s) written to " << dir.string() << '\n';
    return kOk;
  }

  std::string diagnostic;
  const auto pops = enumerate_populations(c.n_per_side, c.strategies, &diagnostic);
  if (pops.empty()) throw ConfigError(diagnostic);

  std::vector<OrderSchedule> schedules;
  for (const auto& [id, s] : loaded) schedules.push_back(s);
  const auto grid = which == Experiment::exp1 ? std::vector<double>{0.0} : noise_grid(c);
  auto output = experiment2(schedules, pops, grid, settings);

  // experiment2 numbers schedules by position; restore manifest ids
  for (auto& r : output.records) r.schedule_id = loaded[static_cast<std::size_t>(r.schedule_id)].first;
  for (auto& f : output.failures)
    f.schedule_id = loaded[static_cast<std::size_t>(f.schedule_id)].first;
  std::stable_sort(output.records.begin(), output.records.end(), record_order);

  const auto dir = c.output_dir / (which == Experiment::exp1 ? "experiment1" : "experiment2");
  std::ostringstream text;
  write_records_csv(text, output.records, c.strategies);
  auto records = open_out(dir / "records.csv");
  records << text.str();
  records.close();
  // analyze what was written, so re-analysis of the file reproduces it
  std::istringstream written(text.str());
  write_analysis(read_records_csv(written).records, dir);
  auto failures = open_out(dir / "failures.csv");
  failures << "schedule_id,population_index,p_index,message\n";
  for (const auto& f : output.failures) {
    std::string msg = f.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    failures << f.schedule_id << ',' << f.population_index << ',' << f.p_index << ',' << msg << '\n';
  }

  const std::size_t cells = schedules.size() * pops.size() * grid.size();
  log << output.records.size() << " records from " << schedules.size() << " schedule(s) x "
      << pops.size() << " populations x " << grid.size() << " noise level(s) written to "
      << dir.string() << '\n';
  return failure_exit(output.failures.size(), cells, c.failure_threshold, log);
}

int cmd_analyze(const fs::path& records_path, const fs::path& out_dir, std::ostream& log) {
  std::ifstream in(records_path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + records_path.string());
  RecordTable table;
  try {
    table = read_records_csv(in);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(records_path.string() + ": " + e.what());
  }
  write_analysis(table.records, out_dir);
  log << "analyzed " << table.records.size() << " records into " << out_dir.string() << '\n';
  return kOk;
}

}  // namespace cdasim::cli
