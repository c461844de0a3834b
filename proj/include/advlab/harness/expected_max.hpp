#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace advlab::harness {

/// Unbiased estimate of E[max of k draws without replacement] from n values:
/// sum_{i=k..n} C(i-1, k-1) / C(n, k) * x_(i).
double expected_max_ustat(std::vector<double> values, int k);

/// expected_max_ustat for k = 1..k_max.
std::vector<double> expected_max_curve(const std::vector<double>& values, int k_max);

/// Linear-interpolation quantile (the usual "type 7").
double quantile(std::vector<double> values, double q);

/// Bootstrap quantiles of expected_max_ustat(resample, k) over n_resamples
/// resamples with replacement.
std::pair<double, double> bootstrap_band(const std::vector<double>& values, int k, int n_resamples = 1000,
                                         std::pair<double, double> quantiles = {0.25, 0.75},
                                         std::uint64_t seed = 0);

}  // namespace advlab::harness
