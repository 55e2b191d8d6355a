#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "acs/appendix.hpp"
#include "acs/appendix_suite.hpp"

using namespace acs;
using namespace acs::appendix;

namespace {
AppendixProbe probe(Index n, double x, double x_hat, double f = 0.2) {
  AppendixProbe p;
  p.n = n;
  p.m = n / 2;
  p.true_amp = x;
  p.est_amp = x_hat;
  p.frequency = f;
  return p;
}
}  // namespace

TEST(GK, IdenticalSinusoidsGiveZero) {
  EXPECT_EQ(g_k(0.0, probe(256, 1.3, 1.3)), 0.0);
  EXPECT_EQ(h_k(0.0, probe(256, 1.3, 1.3)), 0.0);
}

TEST(GK, CenterValue) {
  EXPECT_NEAR(g_k(0.0, probe(1024, 4, 1, 0.25)), 4608.0, 1e-9 * 4608.0);
  EXPECT_NEAR(g_k(0.0, probe(1024, 4, 1, 0.2)), 4608.0, 1e-3 * 4608.0);
}

TEST(GK, NonNegativeAndPlateau) {
  const auto p = probe(1024, 4, 1);
  for (double t : symmetric_grid(0.5 / 1024, 101)) ASSERT_GE(g_k(t, p), 0.0);
  const double plateau = 1024.0 * 4.0 + 1024.0 / 2.0 * 9.0;
  EXPECT_NEAR(g_k(0.5 / 1024, p), plateau, 0.1 * plateau);
}

TEST(HK, BoundedAcrossN) {
  for (Index n : {Index{256}, Index{1024}, Index{4096}}) {
    const auto p = probe(n, 1, 1);
    for (double t : symmetric_grid(0.5 / n, 41)) ASSERT_LE(std::abs(h_k(t * 1.0, p)), 10.0) << n;
  }
}

TEST(HK, RelativeToGShrinksWithN) {
  // h oscillates in sign while g grows linearly, so the trend is checked on the envelope:
  // N |h| / g stays bounded while N grows 32-fold.
  for (Index n : {Index{256}, Index{512}, Index{1024}, Index{2048}, Index{4096}, Index{8192}}) {
    const auto p = probe(n, 1, 1);
    const double t = 0.25 / n;
    EXPECT_LE(static_cast<double>(n) * std::abs(h_k(t, p)) / g_k(t, p), 4.0) << n;
  }
}

TEST(SecondDeriv, MatchesFiniteDifferenceUpToPiSquared) {
  // The printed closed form equals g''(theta) / pi^2 for large N with x = x_hat = 1.
  const Index n = 1024;
  const auto p = probe(n, 1, 1);
  const double t = 0.1 / n;
  const double h = 1e-6 / n;
  const double fd = (g_k(t + h, p) - 2 * g_k(t, p) + g_k(t - h, p)) / (h * h);
  const double closed = std::numbers::pi * std::numbers::pi * g_second_deriv_limit(t, n);
  EXPECT_NEAR(closed / fd, 1.0, 0.01);
}

TEST(SecondDeriv, SignsAroundConvexityEdge) {
  const Index n = 1024;
  EXPECT_GT(g_second_deriv_limit(0.25 / n, n), 0.0);
  EXPECT_GT(g_second_deriv_limit(0.0, n), 0.0);
  EXPECT_NEAR(g_second_deriv_limit(0.0, n) / g_second_deriv_limit(1e-4 / n, n), 1.0, 1e-4);
  const double edge = 1.0 / (3.018 * n);
  EXPECT_GT(g_second_deriv_limit(0.98 * edge, n), 0.0);
  EXPECT_LT(g_second_deriv_limit(1.02 * edge, n), 0.0);
  EXPECT_THROW(g_second_deriv_limit(0.1, 1), std::invalid_argument);
}

TEST(ConvexityRoot, ValueResidualUniqueness) {
  const double q = convexity_root();
  EXPECT_NEAR(q, 1.509, 1e-3);
  EXPECT_LE(std::abs(convexity_residual(q)), 1e-10);
  const double f0 = convexity_residual_pole_free(1.6);
  for (double x = 1.6; x <= 4.0; x += 1e-3)
    ASSERT_EQ(convexity_residual_pole_free(x) < 0.0, f0 < 0.0) << x;
}

TEST(CostCompare, DeviationOrders) {
  const auto grid = symmetric_grid(0.5 / 1024, 201);
  const auto rows0 = approx_cost_compare(suite_probe(1.0), grid, kSuiteSeed);
  const auto rows3 = approx_cost_compare(suite_probe(4.0), grid, kSuiteSeed);
  const double d0 = max_abs_deviation(rows0);
  const double d3 = max_abs_deviation(rows3);
  EXPECT_GE(d0, 63.0 / 5);
  EXPECT_LE(d0, 63.0 * 5);
  EXPECT_GE(d3, 500.0 / 5);
  EXPECT_LE(d3, 500.0 * 5);
  double min3 = 1e300;
  for (const auto& r : rows3) min3 = std::min(min3, r.approx_cost);
  EXPECT_NEAR(min3, 4608.0, 0.001 * 4608.0);
}

TEST(CostCompare, ZeroOperatorGivesZero) {
  auto p = suite_probe(4.0);
  p.sigma_a = 0.0;
  for (const auto& r : approx_cost_compare(p, symmetric_grid(0.5 / 1024, 11), 1)) {
    EXPECT_EQ(r.exact_cost, 0.0);
    EXPECT_EQ(r.approx_cost, 0.0);
  }
}

TEST(CostCompare, ArgminAtTrueFrequency) {
  // One draw of A moves the exact-cost argmin by up to 0.02 bin, so a grid of 1/40 bin is
  // the finest on which "within one grid step" is a fair statement.
  const auto grid = symmetric_grid(0.5 / 1024, 41);
  const double step = grid[1] - grid[0];
  for (auto dist : {EntryDistribution::normal, EntryDistribution::uniform}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      auto p = suite_probe(4.0);
      p.distribution = dist;
      const auto rows = approx_cost_compare(p, grid, seed);
      auto exact = std::min_element(rows.begin(), rows.end(),
                                    [](const auto& a, const auto& b) { return a.exact_cost < b.exact_cost; });
      auto approx = std::min_element(rows.begin(), rows.end(),
                                     [](const auto& a, const auto& b) { return a.approx_cost < b.approx_cost; });
      ASSERT_LE(std::abs(exact->theta), step + 1e-18) << seed;
      ASSERT_LE(std::abs(approx->theta), step + 1e-18) << seed;
    }
  }
}

TEST(CostCompare, KurtosisAndNoiseTerms) {
  EXPECT_EQ(kurtosis(EntryDistribution::normal), 0.0);
  EXPECT_EQ(kurtosis(EntryDistribution::uniform), -1.2);
  auto p = suite_probe(1.0);
  p.sigma_noise = 0.5;
  const auto rows = approx_cost_compare(p, std::vector<double>{0.0}, 3);
  EXPECT_DOUBLE_EQ(rows[0].approx_cost, 0.25);
  EXPECT_NEAR(rows[0].predicted_order, std::sqrt(2.0) * 0.25 / std::sqrt(512.0), 1e-15);
}

TEST(Convexity, SecondDifferences) {
  for (Index n : {Index{256}, Index{1024}}) EXPECT_GE(min_second_difference(n), -1e-6 * n);
}

TEST(Suite, WritesFilesAndPasses) {
  const auto dir = std::filesystem::temp_directory_path() / "acs_appendix_suite_test";
  std::filesystem::remove_all(dir);
  const auto report = run_appendix_suite(dir);
  EXPECT_TRUE(report.all_pass());
  for (const char* f : {"g_profile.csv", "cost_compare_delta0.csv", "cost_compare_delta3.csv", "convexity_root.txt",
                        "summary.txt"})
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  std::ifstream root(dir / "convexity_root.txt");
  std::string line;
  std::getline(root, line);
  EXPECT_EQ(line, "Q = 1.509");
}
