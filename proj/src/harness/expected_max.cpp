#include "advlab/harness/expected_max.hpp"

#include "advlab/diff/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace advlab::harness {

double expected_max_ustat(std::vector<double> values, int k) {
  const int n = static_cast<int>(values.size());
  if (n < 1) throw std::invalid_argument("expected_max_ustat: no values");
  if (k < 1 || k > n) throw std::invalid_argument("expected_max_ustat: k must be in [1, n]");
  std::sort(values.begin(), values.end());
  // C(n, k) as a running product; exact while it fits the mantissa.
  double c_nk = 1.0;
  for (int j = 0; j < k; ++j) c_nk = c_nk * (n - j) / (j + 1);
  double weight = 1.0 / c_nk;  // C(k-1, k-1) / C(n, k)
  double total = 0.0;
  for (int i = k; i <= n; ++i) {
    total += weight * values[static_cast<std::size_t>(i - 1)];
    weight = weight * i / (i - k + 1);  // C(i, k-1) from C(i-1, k-1)
  }
  return total;
}

std::vector<double> expected_max_curve(const std::vector<double>& values, int k_max) {
  std::vector<double> curve;
  const int top = std::min<int>(k_max, static_cast<int>(values.size()));
  for (int k = 1; k <= top; ++k) curve.push_back(expected_max_ustat(values, k));
  return curve;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: no values");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile: q outside [0,1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::pair<double, double> bootstrap_band(const std::vector<double>& values, int k, int n_resamples,
                                         std::pair<double, double> quantiles, std::uint64_t seed) {
  if (n_resamples < 1) throw std::invalid_argument("bootstrap_band: need at least one resample");
  const std::size_t n = values.size();
  if (n == 0) throw std::invalid_argument("bootstrap_band: no values");
  Rng rng(seed, 0xB007);
  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(n_resamples));
  std::vector<double> resample(n);
  for (int r = 0; r < n_resamples; ++r) {
    for (auto& x : resample) x = values[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(n)))];
    stats.push_back(expected_max_ustat(resample, k));
  }
  return {quantile(stats, quantiles.first), quantile(stats, quantiles.second)};
}

}  // namespace advlab::harness
