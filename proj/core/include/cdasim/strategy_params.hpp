#pragma once
#include "cdasim/types.hpp"

namespace cdasim {

// Default constants for every strategy. Values follow the published
// descriptions of each algorithm and the Bristol Stock Exchange defaults;
// all of them can be overridden from the run configuration file.

struct ZicParams {
  Price floor{kMinPrice};    // lowest bid a ZIC buyer may draw
  Price ceiling{kMaxPrice};  // highest ask a ZIC seller may draw
};

struct ZipParams {
  double beta_min{0.1};       // Widrow-Hoff learning rate, drawn per trader
  double beta_max{0.5};
  double momentum_max{0.1};   // momentum drawn from [0, momentum_max]
  double ca{0.05};            // absolute target perturbation
  double cr{0.05};            // relative target perturbation
  double margin_min{0.05};    // initial |margin| drawn from [margin_min, margin_max]
  double margin_max{0.35};
};

struct SniperParams {
  double lurk_fraction{0.2};    // quote only once this fraction of the session remains...
  double shave_growth{3.0};
  double snipe_spread{0.10};    // ...or when the relative spread is below this
  double min_profit{0.02};      // and the opposite best leaves at least this relative profit
};

struct GdxParams {
  double gamma{0.9};        // discount per remaining opportunity
  int horizon{10};          // cap on remaining opportunities in the value recursion
  int memory_trades{5};     // history window, counted in trades
};

struct AaParams {
  double lambda_r{0.05};         // relative aggressiveness step
  double lambda_a{0.05};         // absolute aggressiveness step
  double beta1_min{0.1};         // short-term learning rate range
  double beta1_max{0.5};
  double beta2_min{0.1};         // long-term learning rate range
  double beta2_max{0.5};
  int eq_window{5};              // transactions in the equilibrium estimate
  double eq_decay{0.9};          // weight ratio between consecutive transactions
  double eta{3.0};               // offer change rate toward the target
  double theta_init{-2.0};
  double theta_min{-8.0};
  double theta_max{2.0};
  double gamma{2.0};             // shape of the theta adaptation curve
  double initial_r_max{0.3};     // initial aggressiveness drawn from [-initial_r_max, 0]
  double initial_margin{0.2};    // cold-start quote = limit * (1 -/+ initial_margin)
};

struct StrategyParams {
  ZicParams zic;
  ZipParams zip;
  SniperParams snpr;
  GdxParams gdx;
  AaParams aa;
};

}  // namespace cdasim
