#pragma once
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdasim/records.hpp"

namespace cdasim::stats {

struct Point {
  double x{0.0};
  double y{0.0};
};

struct FitResult {
  double slope{0.0};
  double intercept{0.0};
  double residual_sum{0.0};  // sum of squared residuals
};

// Ordinary least squares. Throws std::invalid_argument on fewer than two
// points or when every x is equal.
FitResult fit_line(std::span<const Point> points);

// Linearly interpolated quantile of unsorted values (q in [0, 1]).
double quantile(std::span<const double> values, double q);

// Keeps v with lo - m*(hi - lo) <= v <= hi + m*(hi - lo), where lo and hi are
// the low_q and high_q quantiles. Input order is preserved.
std::vector<double> remove_outliers(std::span<const double> values, double low_q = 0.10,
                                    double high_q = 0.90, double multiplier = 1.0);

struct RankTestResult {
  double statistic{0.0};  // rank sum of sample a, midranks for ties
  double p_value{1.0};    // two-sided
  std::size_t n1{0};
  std::size_t n2{0};
  bool exact{false};
};

// Wilcoxon rank-sum test. Exact null distribution up to 12 observations in
// total, normal approximation with tie and continuity correction above.
RankTestResult rank_sum_test(std::span<const double> a, std::span<const double> b);

struct AccuracyCurve {
  std::vector<Point> wrong;  // (p, number of incorrect predictions), ascending p
  std::optional<FitResult> trend;
  std::size_t total_wrong{0};
};

AccuracyCurve accuracy_curve(std::span<const ExperimentRecord> records);

double mean(std::span<const double> values);

// One row of the summary: a schedule (or every kept schedule, schedule_id -1)
// at one noise level.
struct SummaryRow {
  int schedule_id{-1};
  int p_index{0};
  double p{0.0};
  std::size_t n{0};
  std::size_t zero_trade{0};
  std::size_t kept{0};           // multipliers left after outlier removal
  double multiplier_mean{0.0};   // after outlier removal
  double market_mean{0.0};
  double predicted_mean{0.0};    // real-phase average of the predicted kind
  double advantage{0.0};         // multiplier_mean - 1
  double above_breakeven{0.0};   // share of multipliers >= 1
  std::size_t wrong{0};
  std::optional<double> rank_p;  // multipliers here vs at p index 0
  bool discarded{false};         // schedule dropped: mostly zero-trade cells
};

struct SeriesFit {
  int schedule_id{-1};
  std::string series;
  FitResult fit;
};

struct PlotPoint {
  int schedule_id{-1};
  std::string series;
  double x{0.0};
  double y{0.0};
};

struct Analysis {
  std::vector<SummaryRow> summary;
  std::vector<SeriesFit> fits;
  std::vector<PlotPoint> plot;
};

// A pure function of the records; row order does not matter.
Analysis analyze(std::span<const ExperimentRecord> records);

void write_summary_csv(std::ostream& out, const Analysis& analysis);
void write_fits_csv(std::ostream& out, const Analysis& analysis);
void write_plot_csv(std::ostream& out, const Analysis& analysis);

}  // namespace cdasim::stats
