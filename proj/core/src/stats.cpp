#include "cdasim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace cdasim::stats {

namespace {

constexpr std::size_t kExactLimit = 12;

// Midranks, doubled so that they stay integral.
std::vector<long> doubled_ranks(std::span<const double> values) {
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return values[i] < values[j]; });
  std::vector<long> ranks(values.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j < idx.size() && values[idx[j]] == values[idx[i]]) ++j;
    const long twice = static_cast<long>(i + 1 + j);  // (i+1) + j, the doubled mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) ranks[idx[k]] = twice;
    i = j;
  }
  return ranks;
}

double tie_term(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const double t = static_cast<double>(j - i);
    sum += t * t * t - t;
    i = j;
  }
  return sum;
}

std::vector<double> finite_multipliers(std::span<const ExperimentRecord* const> records) {
  std::vector<double> out;
  for (const auto* r : records)
    if (!r->zero_trade && std::isfinite(r->multiplier)) out.push_back(r->multiplier);
  return out;
}

SummaryRow summarize(int schedule_id, std::span<const ExperimentRecord* const> cell,
                     std::span<const ExperimentRecord* const> baseline) {
  SummaryRow row;
  row.schedule_id = schedule_id;
  row.p_index = cell.front()->p_index;
  row.p = cell.front()->p;
  row.n = cell.size();

  std::vector<double> market;
  std::vector<double> predicted;
  for (const auto* r : cell) {
    if (r->zero_trade) {
      ++row.zero_trade;
    } else {
      market.push_back(r->market_average);
      if (const auto& v = r->real_average[index_of(r->predicted)]) predicted.push_back(*v);
    }
    if (!r->correct) ++row.wrong;
  }
  const auto multipliers = finite_multipliers(cell);
  if (!multipliers.empty()) {
    const auto kept = remove_outliers(multipliers);
    row.kept = kept.size();
    row.multiplier_mean = mean(kept);
    row.advantage = row.multiplier_mean - 1.0;
    row.above_breakeven =
        static_cast<double>(std::count_if(multipliers.begin(), multipliers.end(),
                                          [](double m) { return m >= 1.0; })) /
        static_cast<double>(multipliers.size());
  }
  row.market_mean = mean(market);
  row.predicted_mean = mean(predicted);

  const auto base = finite_multipliers(baseline);
  if (!multipliers.empty() && !base.empty()) row.rank_p = rank_sum_test(multipliers, base).p_value;
  return row;
}

}  // namespace

FitResult fit_line(std::span<const Point> points) {
  if (points.size() < 2) throw std::invalid_argument("fit_line needs at least two points");
  const double n = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : points) {
    sxx += (p.x - mx) * (p.x - mx);
    sxy += (p.x - mx) * (p.y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: all x values are equal");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (const auto& p : points) {
    const double r = p.y - (fit.intercept + fit.slope * p.x);
    fit.residual_sum += r * r;
  }
  return fit;
}

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level outside [0, 1]");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

std::vector<double> remove_outliers(std::span<const double> values, double low_q, double high_q,
                                    double multiplier) {
  if (values.empty()) return {};
  const double lo = quantile(values, low_q);
  const double hi = quantile(values, high_q);
  const double width = multiplier * (hi - lo);
  std::vector<double> out;
  for (double v : values)
    if (v >= lo - width && v <= hi + width) out.push_back(v);
  return out;
}

RankTestResult rank_sum_test(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("rank_sum_test needs two nonempty samples");
  RankTestResult res;
  res.n1 = a.size();
  res.n2 = b.size();
  const std::size_t total = a.size() + b.size();

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = doubled_ranks(pooled);
  const long w2 = std::accumulate(ranks.begin(), ranks.begin() + static_cast<long>(a.size()), 0L);
  res.statistic = static_cast<double>(w2) / 2.0;

  const double n1 = static_cast<double>(res.n1);
  const double n2 = static_cast<double>(res.n2);
  const double n = static_cast<double>(total);

  if (total <= kExactLimit) {
    res.exact = true;
    // ways[j][s]: subsets of size j with doubled rank sum s
    const long max_sum = std::accumulate(ranks.begin(), ranks.end(), 0L);
    std::vector<std::vector<double>> ways(res.n1 + 1, std::vector<double>(max_sum + 1, 0.0));
    ways[0][0] = 1.0;
    for (long r : ranks)
      for (std::size_t j = res.n1; j >= 1; --j)
        for (long s = max_sum; s >= r; --s) ways[j][s] += ways[j - 1][s - r];
    const long e2 = static_cast<long>(res.n1 * (total + 1));  // null mean of the doubled sum
    const long dev = std::labs(w2 - e2);
    double hit = 0.0;
    double all = 0.0;
    for (long s = 0; s <= max_sum; ++s) {
      all += ways[res.n1][s];
      if (std::labs(s - e2) >= dev) hit += ways[res.n1][s];
    }
    res.p_value = std::min(1.0, hit / all);
    return res;
  }

  const double u = res.statistic - n1 * (n1 + 1.0) / 2.0;
  const double mu = n1 * n2 / 2.0;
  const double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term(pooled) / (n * (n - 1.0)));
  if (var <= 0.0) {
    res.p_value = 1.0;
    return res;
  }
  const double z = std::max(0.0, std::fabs(u - mu) - 0.5) / std::sqrt(var);
  res.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return res;
}

AccuracyCurve accuracy_curve(std::span<const ExperimentRecord> records) {
  std::map<double, std::size_t> wrong;
  for (const auto& r : records) {
    auto& w = wrong[r.p];
    if (!r.correct) ++w;
  }
  AccuracyCurve curve;
  for (const auto& [p, w] : wrong) {
    curve.wrong.push_back(Point{p, static_cast<double>(w)});
    curve.total_wrong += w;
  }
  if (curve.wrong.size() >= 2) curve.trend = fit_line(curve.wrong);
  return curve;
}

double mean(std::span<const double> values) {
  if (values.empty()) return std::nan("");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

Analysis analyze(std::span<const ExperimentRecord> records) {
  Analysis out;
  if (records.empty()) return out;

  std::vector<ExperimentRecord> sorted(records.begin(), records.end());
  std::stable_sort(sorted.begin(), sorted.end(), record_order);

  // schedule -> p index -> records
  std::map<int, std::map<int, std::vector<const ExperimentRecord*>>> cells;
  for (const auto& r : sorted) cells[r.schedule_id][r.p_index].push_back(&r);

  std::map<int, std::vector<const ExperimentRecord*>> pooled;
  std::map<int, bool> discarded;
  for (const auto& [sid, by_p] : cells) {
    std::size_t n = 0;
    std::size_t zero = 0;
    for (const auto& [pi, cell] : by_p)
      for (const auto* r : cell) {
        ++n;
        if (r->zero_trade) ++zero;
      }
    discarded[sid] = 2 * zero > n;
    if (!discarded[sid])
      for (const auto& [pi, cell] : by_p) pooled[pi].insert(pooled[pi].end(), cell.begin(), cell.end());
  }

  auto emit = [&](int sid, const std::map<int, std::vector<const ExperimentRecord*>>& by_p,
                  bool dropped) {
    const auto base = by_p.find(0);
    std::vector<Point> mult;
    std::vector<Point> market;
    std::vector<Point> wrong;
    for (const auto& [pi, cell] : by_p) {
      if (cell.empty()) continue;
      auto row = summarize(sid, cell,
                           base == by_p.end() ? std::span<const ExperimentRecord* const>{}
                                              : std::span<const ExperimentRecord* const>(base->second));
      row.discarded = dropped;
      if (row.kept > 0) {
        mult.push_back({row.p, row.multiplier_mean});
        out.plot.push_back({sid, "multiplier_mean", row.p, row.multiplier_mean});
      }
      if (row.n > row.zero_trade) {
        market.push_back({row.p, row.market_mean});
        out.plot.push_back({sid, "market_mean", row.p, row.market_mean});
      }
      wrong.push_back({row.p, static_cast<double>(row.wrong)});
      out.plot.push_back({sid, "wrong", row.p, static_cast<double>(row.wrong)});
      if (row.rank_p) out.plot.push_back({sid, "rank_p", row.p, *row.rank_p});
      if (pi == 0)
        for (const auto* r : cell)
          if (!r->zero_trade)
            if (const auto& v = r->real_average[index_of(r->predicted)])
              out.plot.push_back({sid, "breakeven", r->market_average, *v});
      out.summary.push_back(row);
    }
    auto add_fit = [&](const char* name, const std::vector<Point>& pts) {
      if (pts.size() < 2) return;
      out.fits.push_back({sid, name, fit_line(pts)});
    };
    add_fit("multiplier_mean", mult);
    add_fit("market_mean", market);
    add_fit("wrong", wrong);
  };

  for (const auto& [sid, by_p] : cells) emit(sid, by_p, discarded[sid]);
  if (!pooled.empty()) emit(-1, pooled, false);
  return out;
}

namespace {

std::string schedule_cell(int sid) { return sid < 0 ? "all" : std::to_string(sid); }

}  // namespace

void write_summary_csv(std::ostream& out, const Analysis& analysis) {
  out << "schedule_id,p_index,p,n,zero_trade,kept,multiplier_mean,market_mean,predicted_mean,"
         "advantage,above_breakeven,wrong,rank_p_vs_p0,discarded\n";
  for (const auto& r : analysis.summary)
    out << schedule_cell(r.schedule_id) << ',' << r.p_index << ',' << format_double(r.p) << ','
        << r.n << ',' << r.zero_trade << ',' << r.kept << ',' << format_double(r.multiplier_mean)
        << ',' << format_double(r.market_mean) << ',' << format_double(r.predicted_mean) << ','
        << format_double(r.advantage) << ',' << format_double(r.above_breakeven) << ',' << r.wrong
        << ',' << (r.rank_p ? format_double(*r.rank_p) : std::string{}) << ','
        << (r.discarded ? 1 : 0) << '\n';
}

void write_fits_csv(std::ostream& out, const Analysis& analysis) {
  out << "schedule_id,series,slope,intercept,residual_sum\n";
  for (const auto& f : analysis.fits)
    out << schedule_cell(f.schedule_id) << ',' << f.series << ',' << format_double(f.fit.slope, 9)
        << ',' << format_double(f.fit.intercept, 9) << ',' << format_double(f.fit.residual_sum, 9)
        << '\n';
}

void write_plot_csv(std::ostream& out, const Analysis& analysis) {
  out << "schedule_id,series,x,y\n";
  for (const auto& p : analysis.plot)
    out << schedule_cell(p.schedule_id) << ',' << p.series << ',' << format_double(p.x) << ','
        << format_double(p.y) << '\n';
}

}  // namespace cdasim::stats
