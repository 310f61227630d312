#pragma once
// Reference implementations used only to check the library. Each one is
// the slow, obvious computation.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

inline std::uint64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

// Counts positive compositions of n into k parts by nested enumeration.
inline std::uint64_t count_compositions(int n, int k) {
  if (k == 1) return n >= 1 ? 1 : 0;
  std::uint64_t total = 0;
  for (int first = 1; first < n; ++first) total += count_compositions(n - first, k - 1);
  return total;
}

// Line fit by Cramer's rule on the raw normal equations
//   [n  Sx ] [b]   [Sy ]
//   [Sx Sxx] [m] = [Sxy]
struct Fit {
  double slope;
  double intercept;
};
inline Fit cramer_fit(const std::vector<double>& x, const std::vector<double>& y) {
  long double n = static_cast<long double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double det = n * sxx - sx * sx;
  return {static_cast<double>((n * sxy - sx * sy) / det),
          static_cast<double>((sy * sxx - sx * sxy) / det)};
}

// Two-sided rank-sum p-value by enumerating every split of the pooled sample.
inline double permutation_rank_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = pooled.size();
  // midranks
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (pooled[j] < pooled[i]) ++less;
      if (pooled[j] == pooled[i]) ++equal;
    }
    rank[i] = less + (equal + 1) / 2.0;
  }
  double observed = 0;
  for (std::size_t i = 0; i < a.size(); ++i) observed += rank[i];
  const double mean = a.size() * (n + 1) / 2.0;
  const double dev = std::fabs(observed - mean);

  std::uint64_t hits = 0, total = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != a.size()) continue;
    double w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) w += rank[i];
    ++total;
    if (std::fabs(w - mean) >= dev - 1e-9) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

// Competitive equilibrium by trying every quantity: the largest q for which
// the q-th highest demand covers the q-th lowest supply, plus the surplus.
struct Ce {
  int quantity;
  long surplus;
};
inline Ce brute_equilibrium(std::vector<int> supply, std::vector<int> demand) {
  std::sort(supply.begin(), supply.end());
  std::sort(demand.rbegin(), demand.rend());
  Ce best{0, 0};
  for (std::size_t q = 1; q <= std::min(supply.size(), demand.size()); ++q) {
    long s = 0;
    bool ok = true;
    for (std::size_t i = 0; i < q; ++i) {
      if (demand[i] < supply[i]) ok = false;
      s += demand[i] - supply[i];
    }
    if (ok && s >= best.surplus) best = {static_cast<int>(q), s};
  }
  return best;
}

}  // namespace oracle
