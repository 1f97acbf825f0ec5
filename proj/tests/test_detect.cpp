#include <gtest/gtest.h>

#include "gsynch/detect.hpp"

using namespace gsynch;

TEST(Quantile, OrderStatistic) {
  std::vector<double> xs;
  for (int i = 1; i <= 200; ++i) xs.push_back(i);
  EXPECT_EQ(empirical_quantile(xs, 0.95), 190.0);
  EXPECT_EQ(empirical_quantile({3.0, 1.0, 2.0}, 0.5), 2.0);
  EXPECT_EQ(empirical_quantile({5.0}, 0.99), 5.0);
  EXPECT_THROW(empirical_quantile({}, 0.5), Error);
}

TEST(Wilson, KnownInterval) {
  const auto ci = wilson_interval(95, 100);
  EXPECT_NEAR(ci.lower, 0.88826, 1e-4);
  EXPECT_NEAR(ci.upper, 0.97846, 1e-4);
  const auto all = wilson_interval(100, 100);
  EXPECT_EQ(all.upper, 1.0);
  EXPECT_THROW(wilson_interval(5, 3), Error);
}

TEST(Stats, ChiSquareUniform) {
  const auto r = chi_square_uniform({10, 10, 10, 10});
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);
  EXPECT_LT(chi_square_uniform({100, 0, 0}).p_value, 1e-10);
}

TEST(Stats, KolmogorovSurvival) {
  EXPECT_NEAR(kolmogorov_survival(1.36), 0.0494, 5e-4);
  EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
}

TEST(Detect, LabelsFromThreshold) {
  SamplerOptions so;
  so.noise = false;
  const auto obs = sample_gsynch_circle(2, {1.0, 3.0}, 30, 1, so);
  const auto v = detect(obs, 2.0);
  EXPECT_EQ(v.label, 'p');
  EXPECT_NEAR(v.statistic, 3.0, 1e-10);
  EXPECT_EQ(detect(obs, 3.5).label, 'q');
}

TEST(Detect, ConfigValidation) {
  DetectorConfig c;
  c.alpha = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c.alpha = 0.05;
  c.calibration_trials = 10;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Detect, NullEdgeNearTwo) {
  const double top = max_top_eigenvalue(ModelSpec::circle(1), 0.0, 600, 3, {});
  EXPECT_NEAR(top, 2.0, 0.15);
}

TEST(PowerCurve, StrongSignalAlwaysDetected) {
  DetectorConfig c;
  c.calibration_trials = 60;
  const auto curve = power_curve(ModelSpec::cyclic(4), 150, {0.0, 3.0}, 30, c, 12);
  ASSERT_EQ(curve.rows.size(), 2u);
  EXPECT_EQ(curve.rows[1].power, 1.0);
  EXPECT_LE(curve.rows[0].power, 0.3);
  EXPECT_LE(curve.rows[1].ci.lower, 1.0);
  const auto again = power_curve(ModelSpec::cyclic(4), 150, {0.0, 3.0}, 30, c, 12);
  EXPECT_EQ(again.calibration.threshold, curve.calibration.threshold);
  EXPECT_EQ(again.rows[0].rejections, curve.rows[0].rejections);
}
