#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "error.hpp"

namespace gsynch {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// P(K > x) for the Kolmogorov distribution.
inline double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

/// One-sample KS test against a continuous CDF (asymptotic p-value with
/// the usual small-sample correction).
inline TestResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf) {
  require(!sample.empty(), "ks_test needs a nonempty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

/// Pearson chi-square goodness of fit against uniform cell probabilities.
inline TestResult chi_square_uniform(const std::vector<std::int64_t>& counts) {
  require(counts.size() >= 2, "chi-square test needs at least two cells");
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  require(total > 0.0, "chi-square test needs a nonempty sample");
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) stat += (c - expected) * (c - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return {stat, boost::math::cdf(boost::math::complement(dist, stat))};
}

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

/// Wilson score interval; z = 1.96 for 95%.
inline Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = 1.96) {
  require(trials > 0 && successes >= 0 && successes <= trials, "wilson_interval needs 0 <= successes <= trials");
  const double n = static_cast<double>(trials);
  const double p = successes / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  Interval ci{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  if (successes == 0) ci.lower = 0.0;
  if (successes == trials) ci.upper = 1.0;
  return ci;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace gsynch
