#include "cdasim/records.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace cdasim {

std::string format_double(double v, int precision) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  // avoid "-0.000000"
  if (std::string_view(buf).find_first_not_of("-0.") == std::string_view::npos && buf[0] == '-')
    return std::string(buf + 1);
  return buf;
}

std::vector<std::string> record_columns(std::span<const StrategyKind> strategy_set) {
  std::vector<std::string> cols{"schedule_id", "population", "p", "predicted_kind"};
  for (auto k : strategy_set) cols.push_back("real_avg_" + std::string(to_string(k)));
  for (auto k : strategy_set) cols.push_back("pred_avg_" + std::string(to_string(k)));
  for (const char* c : {"market_avg", "multiplier", "correct", "K", "seed", "population_index",
                        "p_index", "observed", "status"})
    cols.emplace_back(c);
  return cols;
}

bool record_order(const ExperimentRecord& a, const ExperimentRecord& b) noexcept {
  return std::tie(a.schedule_id, a.population_index, a.p_index) <
         std::tie(b.schedule_id, b.population_index, b.p_index);
}

namespace {

std::string optional_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

TraderPopulation parse_population(const std::string& text, std::span<const StrategyKind> set) {
  TraderPopulation pop;
  std::istringstream ss(text);
  std::string part;
  std::size_t i = 0;
  while (std::getline(ss, part, '-')) {
    if (i >= set.size()) throw std::invalid_argument("population '" + text + "' has too many parts");
    const auto colon = part.find(':');
    const int buyers = std::stoi(part.substr(0, colon));
    const int sellers = colon == std::string::npos ? buyers : std::stoi(part.substr(colon + 1));
    pop[set[i]] = SideCounts{buyers, sellers};
    ++i;
  }
  if (i != set.size()) throw std::invalid_argument("population '" + text + "' has too few parts");
  return pop;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  return std::stod(s);
}

}  // namespace

void write_records_csv(std::ostream& out, std::span<const ExperimentRecord> records,
                       std::span<const StrategyKind> strategy_set) {
  const auto cols = record_columns(strategy_set);
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';

  std::vector<ExperimentRecord> sorted(records.begin(), records.end());
  std::stable_sort(sorted.begin(), sorted.end(), record_order);
  for (const auto& r : sorted) {
    out << r.schedule_id << ',' << r.population.key(strategy_set) << ',' << format_double(r.p)
        << ',' << to_string(r.predicted);
    for (auto k : strategy_set) out << ',' << optional_cell(r.real_average[index_of(k)]);
    for (auto k : strategy_set) out << ',' << optional_cell(r.prediction_average[index_of(k)]);
    out << ',' << format_double(r.market_average) << ','
        << format_double(r.zero_trade ? std::nan("") : r.multiplier) << ',' << (r.correct ? 1 : 0)
        << ',' << r.subtrials << ',' << r.seed << ',' << r.population_index << ',' << r.p_index
        << ',' << r.observed.key(strategy_set) << ',' << (r.zero_trade ? "zero_trade" : "ok")
        << '\n';
  }
}

RecordTable read_records_csv(std::istream& in) {
  RecordTable table;
  std::string line;
  if (!std::getline(in, line) || line.empty()) return table;
  const auto header = split(line);

  for (const auto& h : header) {
    if (h.rfind("real_avg_", 0) == 0) {
      const auto kind = parse_kind(h.substr(9));
      if (!kind) throw std::invalid_argument("records: unknown strategy column " + h);
      table.strategy_set.push_back(*kind);
    }
  }
  const auto expected = record_columns(table.strategy_set);
  if (header != expected) {
    std::string missing;
    std::string unexpected;
    for (const auto& c : expected)
      if (std::find(header.begin(), header.end(), c) == header.end()) missing += " " + c;
    for (const auto& c : header)
      if (std::find(expected.begin(), expected.end(), c) == expected.end()) unexpected += " " + c;
    std::string msg = "records: header does not match the schema;";
    if (!missing.empty()) msg += " missing:" + missing + ";";
    if (!unexpected.empty()) msg += " unexpected:" + unexpected + ";";
    if (missing.empty() && unexpected.empty()) msg += " columns out of order;";
    throw std::invalid_argument(msg);
  }

  const auto& set = table.strategy_set;
  const std::size_t n = set.size();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != expected.size())
      throw std::invalid_argument("records: line " + std::to_string(line_no) + " has " +
                                  std::to_string(cells.size()) + " fields, expected " +
                                  std::to_string(expected.size()));
    ExperimentRecord r;
    std::size_t c = 0;
    r.schedule_id = std::stoi(cells[c++]);
    r.population = parse_population(cells[c++], set);
    r.p = parse_double(cells[c++]);
    const auto predicted = parse_kind(cells[c++]);
    if (!predicted)
      throw std::invalid_argument("records: bad predicted_kind on line " + std::to_string(line_no));
    r.predicted = *predicted;
    for (std::size_t i = 0; i < n; ++i, ++c)
      if (!cells[c].empty()) r.real_average[index_of(set[i])] = parse_double(cells[c]);
    for (std::size_t i = 0; i < n; ++i, ++c)
      if (!cells[c].empty()) r.prediction_average[index_of(set[i])] = parse_double(cells[c]);
    r.market_average = parse_double(cells[c++]);
    r.multiplier = parse_double(cells[c++]);
    r.correct = cells[c++] == "1";
    r.subtrials = std::stoi(cells[c++]);
    r.seed = std::stoull(cells[c++]);
    r.population_index = std::stoi(cells[c++]);
    r.p_index = std::stoi(cells[c++]);
    r.observed = parse_population(cells[c++], set);
    r.zero_trade = cells[c++] == "zero_trade";
    if (r.zero_trade) r.multiplier = 0.0;
    table.records.push_back(std::move(r));
  }
  return table;
}

}  // namespace cdasim
