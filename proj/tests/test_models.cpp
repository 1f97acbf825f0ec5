#include <gtest/gtest.h>

#include <filesystem>

#include "gsynch/observation_io.hpp"
#include "gsynch/stats.hpp"
#include "gsynch/suites.hpp"

using namespace gsynch;

TEST(Signals, CircleAndCyclicDrawsAreUniform) {
  const auto x = sample_finite_signal(Prior::cyclic, 6, 6000, 12);
  std::vector<std::int64_t> counts(6, 0);
  for (int e : x.elements) ++counts[e];
  EXPECT_GT(chi_square_uniform(counts).p_value, 1e-3);

  const auto c = sample_circle_signal(3000, 12);
  std::vector<double> u;
  for (double p : c.phases) u.push_back(p / (2 * M_PI));
  EXPECT_GT(ks_test(u, [](double t) { return std::clamp(t, 0.0, 1.0); }).p_value, 1e-3);
}

TEST(Circle, NoiselessChannelIsRankOne) {
  SamplerOptions so;
  so.noise = false;
  const int n = 40;
  const auto obs = sample_gsynch_circle(3, {0.5, 1.0, 2.0}, n, 9, so);
  ASSERT_EQ(obs.frequencies.size(), 3u);
  const auto x = sample_circle_signal(n, 9);
  for (int l = 1; l <= 3; ++l) {
    const auto& y = obs.frequencies[l - 1].y;
    for (int a : {0, 7, 39})
      for (int b : {0, 3, 21}) {
        const cplx expected = obs.frequencies[l - 1].lambda / n * std::polar(1.0, l * (x.phases[a] - x.phases[b]));
        EXPECT_LT(std::abs(y(a, b) - expected), 1e-14);
      }
    EXPECT_NEAR(hermitian_eigenvalues(y).maxCoeff(), obs.frequencies[l - 1].lambda, 1e-12);
  }
}

TEST(Cyclic, EvenOrderHasRealChannel) {
  const auto obs = sample_gsynch_cyclic(6, {1.0}, 20, 3);
  ASSERT_EQ(obs.frequencies.size(), 3u);
  EXPECT_EQ(obs.frequencies[2].noise, Ensemble::GOE);
  EXPECT_EQ(obs.frequencies[2].y.imag().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(obs.frequencies[0].noise, Ensemble::GUE);
  EXPECT_EQ(sample_gsynch_cyclic(5, {1.0}, 10, 3).frequencies.size(), 2u);
}

TEST(Cyclic, LambdaCountMismatchIsInvalid) {
  EXPECT_THROW(sample_gsynch_cyclic(7, {1.0, 2.0}, 10, 1), Error);
  EXPECT_THROW(sample_gsynch_cyclic(1, {1.0}, 10, 1), Error);
  EXPECT_THROW(sample_gsynch_circle(2, {-1.0}, 10, 1), Error);
}

TEST(Group, ChannelSizesAndNoiseByType) {
  const auto model = ModelSpec::finite_group(build_catalog("quaternion8"));
  const auto obs = sample_observation(model, {1.0}, 12, 5);
  ASSERT_EQ(obs.frequencies.size(), 4u);
  for (const auto& f : obs.frequencies) {
    EXPECT_EQ(f.y.rows(), 12 * f.complex_dim);
    EXPECT_EQ(hermitian_defect(f.y), 0.0);
    EXPECT_EQ(f.noise, ensemble_for(f.type));
    EXPECT_NE(f.type, RepType::complex);
  }
}

TEST(Group, CoupledWithCyclicSampler) {
  for (const auto& c : checks_coupled_samplers({2, 3, 4, 7, 8}, 15, 44)) EXPECT_TRUE(c.pass) << c.params << " " << c.note;
}

TEST(Indicator, NoiseIsHermitianPaired) {
  const auto g = build_catalog("dihedral(3)");
  const auto obs = sample_indicator(g.group, 6, 0.0, 2);
  for (int k = 0; k < 6; ++k)
    for (int j = 0; j < 6; ++j)
      for (int h = 0; h < 6; ++h) EXPECT_EQ(obs.at(j, k, g.group.inverse(h)), std::conj(obs.at(k, j, h)));
}

TEST(Indicator, NoiselessMapsToCanonicalSignal) {
  for (const auto& c : checks_indicator_signal({"cyclic(3)", "cyclic(4)", "dihedral(3)", "quaternion8"}, {1, 3, 8}, 1.1, 6))
    EXPECT_TRUE(c.pass) << c.name << " " << c.params << " value=" << c.value;
}

TEST(Indicator, NullVarianceMatchesCanonical) {
  for (const auto& c : checks_indicator_noise({"cyclic(3)", "dihedral(3)"}, 20, 200, 61, 0.08))
    EXPECT_TRUE(c.pass) << c.params << " value=" << c.value << " reference=" << c.reference;
}

TEST(ObservationIo, JsonAndBinaryRoundTrip) {
  namespace fs = std::filesystem;
  const auto obs = sample_observation(ModelSpec::finite_group(build_catalog("dihedral(4)")), {0.7}, 9, 31);
  for (bool binary : {false, true}) {
    const auto path = (fs::temp_directory_path() / (binary ? "gsynch_obs.bin" : "gsynch_obs.json")).string();
    save_observation(path, obs, binary);
    const auto back = load_observation(path);
    fs::remove(path);
    ASSERT_EQ(back.frequencies.size(), obs.frequencies.size());
    EXPECT_EQ(back.n, obs.n);
    EXPECT_EQ(back.seed, obs.seed);
    for (std::size_t i = 0; i < obs.frequencies.size(); ++i) {
      EXPECT_EQ(back.frequencies[i].type, obs.frequencies[i].type);
      EXPECT_EQ((back.frequencies[i].y - obs.frequencies[i].y).cwiseAbs().maxCoeff(), 0.0);
    }
  }
}

TEST(ModelSpec, Parsing) {
  EXPECT_EQ(model_kind_from_string("circle"), ModelKind::circle);
  EXPECT_THROW(model_kind_from_string("torus"), Error);
  EXPECT_EQ(ModelSpec::cyclic(9).frequency_count(), 4u);
  EXPECT_EQ(ModelSpec::circle(3).frequency_count(), 3u);
}
