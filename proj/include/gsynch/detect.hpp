#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"
#include "linalg.hpp"
#include "models.hpp"
#include "rng.hpp"
#include "stats.hpp"

namespace gsynch {

struct DetectorConfig {
  double alpha = 0.05;
  int calibration_trials = 200;
  LanczosOptions eigen;

  void validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::invalid_parameter, "alpha must lie in (0,1)");
    if (calibration_trials < 50) fail(ErrorKind::invalid_parameter, "calibration needs at least 50 trials");
    if (!(eigen.tol > 0.0)) fail(ErrorKind::invalid_parameter, "eigen-solver tolerance must be > 0");
  }
};

struct DetectionVerdict {
  char label = 'q';  ///< 'p' planted, 'q' null
  std::vector<double> top_eigenvalues;
  double statistic = 0.0;  ///< max over frequencies
  double threshold = 0.0;
};

inline std::vector<double> top_eigenvalues(const SynchObservation& obs, const LanczosOptions& opt = {}) {
  require(!obs.frequencies.empty(), "observation has no frequencies");
  std::vector<double> out;
  out.reserve(obs.frequencies.size());
  for (const auto& f : obs.frequencies) out.push_back(top_eigenvalue(f.y, opt));
  return out;
}

inline DetectionVerdict detect(const SynchObservation& obs, double threshold, const LanczosOptions& opt = {}) {
  DetectionVerdict v;
  v.top_eigenvalues = top_eigenvalues(obs, opt);
  v.statistic = *std::max_element(v.top_eigenvalues.begin(), v.top_eigenvalues.end());
  v.threshold = threshold;
  v.label = v.statistic > threshold ? 'p' : 'q';
  return v;
}

/// Max-over-frequencies top eigenvalue of one draw.
inline double max_top_eigenvalue(const ModelSpec& model, double lambda, int n, std::uint64_t seed,
                                 const LanczosOptions& opt) {
  SamplerOptions so;
  so.signal = lambda != 0.0;
  const auto obs = sample_observation(model, {lambda}, n, seed, so);
  const auto tops = top_eigenvalues(obs, opt);
  return *std::max_element(tops.begin(), tops.end());
}

/// (1 - alpha) empirical quantile, order statistic ceil((1 - alpha) M).
inline double empirical_quantile(std::vector<double> sample, double level) {
  require(!sample.empty(), "quantile of an empty sample");
  std::sort(sample.begin(), sample.end());
  const auto m = static_cast<double>(sample.size());
  auto rank = static_cast<std::size_t>(std::ceil(level * m - 1e-12));
  rank = std::clamp<std::size_t>(rank, 1, sample.size());
  return sample[rank - 1];
}

struct Calibration {
  double threshold = 0.0;
  std::vector<double> null_statistics;
};

inline Calibration calibrate_threshold(const ModelSpec& model, int n, const DetectorConfig& config,
                                       std::uint64_t seed) {
  config.validate();
  Calibration c;
  for (int t = 0; t < config.calibration_trials; ++t)
    c.null_statistics.push_back(max_top_eigenvalue(model, 0.0, n, derive_seed(seed, 1, t), config.eigen));
  c.threshold = empirical_quantile(c.null_statistics, 1.0 - config.alpha);
  return c;
}

struct PowerRow {
  double lambda = 0.0;
  int trials = 0;
  int rejections = 0;
  double power = 0.0;
  Interval ci;
  double type1 = 0.0;  ///< rejection rate on fresh null draws
  double mean_top = 0.0;
  double threshold = 0.0;
};

struct PowerCurve {
  Calibration calibration;
  int null_trials = 0;
  int null_rejections = 0;
  std::vector<PowerRow> rows;
};

inline PowerCurve power_curve(const ModelSpec& model, int n, const std::vector<double>& lambdas, int trials,
                              const DetectorConfig& config, std::uint64_t seed) {
  require(!lambdas.empty(), "power_curve needs a nonempty lambda grid");
  require(trials >= 1, "power_curve needs trials >= 1");
  PowerCurve out;
  out.calibration = calibrate_threshold(model, n, config, seed);
  const double thr = out.calibration.threshold;
  out.null_trials = trials;
  for (int t = 0; t < trials; ++t)
    if (max_top_eigenvalue(model, 0.0, n, derive_seed(seed, 2, t), config.eigen) > thr) ++out.null_rejections;
  const double type1 = static_cast<double>(out.null_rejections) / trials;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    require(lambdas[i] >= 0.0, "lambda grid entries must be >= 0");
    PowerRow row;
    row.lambda = lambdas[i];
    row.trials = trials;
    row.threshold = thr;
    row.type1 = type1;
    KahanSum top;
    for (int t = 0; t < trials; ++t) {
      const double s = max_top_eigenvalue(model, lambdas[i], n, derive_seed(seed, 3 + i, t), config.eigen);
      top.add(s);
      if (s > thr) ++row.rejections;
    }
    row.power = static_cast<double>(row.rejections) / trials;
    row.ci = wilson_interval(row.rejections, trials);
    row.mean_top = top.value() / trials;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace gsynch
