#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "acs/metrics.hpp"

using namespace acs;

TEST(NormalizedRmse, Basics) {
  Vector z(4);
  z << 1, 2, 3, 4;
  EXPECT_EQ(normalized_rmse(z, z), 0.0);
  EXPECT_DOUBLE_EQ(normalized_rmse(z, Vector::Zero(4)), 1.0);
  EXPECT_DOUBLE_EQ(normalized_rmse(z, 2.0 * z), 1.0);
  EXPECT_THROW(normalized_rmse(Vector::Zero(4), z), std::invalid_argument);
  EXPECT_THROW(normalized_rmse(z, Vector::Zero(3)), std::invalid_argument);
}

TEST(SupportErr, ExactMatchIsZero) {
  ToneSet truth{{{0.1, std::polar(1.0, 0.3)}, {0.3, std::polar(1.0, 2.0)}}, 0.01};
  EXPECT_NEAR(support_err(truth, truth), 0.0, 1e-15);
}

TEST(SupportErr, MissingToneCostsItsModulus) {
  ToneSet truth{{{0.1, std::polar(1.0, 0.3)}, {0.3, std::polar(1.0, 2.0)}}, 0.01};
  ToneSet est{{{0.1, std::polar(1.0, 0.3)}}, 0.01};
  EXPECT_NEAR(support_err(truth, est), 1.0, 1e-15);
  EXPECT_FALSE(all_tones_located(truth, est));
}

TEST(SupportErr, SplitEstimatesAreSummed) {
  ToneSet truth{{{0.2, {1.0, 0.0}}}, 0.01};
  ToneSet est{{{0.195, {0.5, 0.0}}, {0.205, {0.5, 0.0}}, {0.4, {3.0, 0.0}}}, 0.01};
  EXPECT_NEAR(support_err(truth, est), 0.0, 1e-15);  // far line ignored
  EXPECT_TRUE(all_tones_located(truth, est));
}

TEST(SupportErr, WindowIsStrict) {
  ToneSet truth{{{0.2, {1.0, 0.0}}}, 0.01};
  ToneSet est{{{0.2 + 0.0125, {1.0, 0.0}}}, 0.01};
  EXPECT_NEAR(support_err(truth, est), 1.0, 1e-15);
}

TEST(TruthTones, UnitPhasors) {
  const auto scene = generate_scene(256, 6, QFactor{1}, 5);
  const auto t = truth_tones(scene, default_epsilon(256, QFactor{1}));
  ASSERT_EQ(t.lines.size(), 3u);
  EXPECT_DOUBLE_EQ(t.epsilon, 1.0 / (5.0 * 256));
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(std::abs(t.lines[i].amplitude), 1.0, 1e-15);
    EXPECT_NEAR(std::arg(t.lines[i].amplitude), std::remainder(scene.tones[i].phase, 2 * std::numbers::pi), 1e-12);
  }
}

TEST(ExtractTones, PerfectModelHasZeroError) {
  // Truth expressed on a dictionary perturbed to the true frequencies gives err = 0.
  const auto scene = generate_scene(256, 6, QFactor{1}, 6, {.exclude_dc_bin = true});
  auto d = PerturbedDictionary::unperturbed(256);
  Vector x = Vector::Zero(256);
  for (const Tone& t : scene.tones) {
    d.set_perturbation(t.bin, t.perturbation);
    x[d.pair(t.bin).cos_column] = std::cos(t.phase);
    x[d.pair(t.bin).sin_column] = std::sin(t.phase);
  }
  EXPECT_LE((reconstruct(d, x) - scene.clean_signal).cwiseAbs().maxCoeff(), 1e-12);
  const double eps = default_epsilon(256, QFactor{1});
  const auto est = extract_tones(d, x, 0.1 * x.norm(), eps);
  EXPECT_EQ(est.lines.size(), 3u);
  EXPECT_NEAR(support_err(truth_tones(scene, eps), est), 0.0, 1e-12);
}
