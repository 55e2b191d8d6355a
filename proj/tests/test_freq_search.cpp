#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "acs/freq_search.hpp"
#include "acs/rng.hpp"

using namespace acs;

namespace {

// One tone at bin j with offset theta_true and phase phi; coefficients at amplitude amp.
struct ToneProblem {
  SensingOperator a;
  PerturbedDictionary dict;
  Vector x;
  Vector y;
  Index j;
  double theta_true;
};

ToneProblem tone_problem(SensingOperator a, QFactor q, Index j, double theta_true, double phi, double true_amp,
                         double est_amp) {
  const Index n = a.cols();
  const auto truth_dict = PerturbedDictionary::unperturbed(n, q).with_perturbation(j, theta_true);
  Vector xt = Vector::Zero(truth_dict.n_atoms());
  xt[truth_dict.pair(j).cos_column] = true_amp * std::cos(phi);
  xt[truth_dict.pair(j).sin_column] = true_amp * std::sin(phi);
  Vector y = a.apply_vector(reconstruct(truth_dict, xt));
  Vector x = xt * (est_amp / true_amp);
  return {std::move(a), PerturbedDictionary::unperturbed(n, q), std::move(x), std::move(y), j, theta_true};
}

SensingOperator identity_operator(Index n) { return SensingOperator(SensingKind::gaussian, Matrix::Identity(n, n)); }

double grid_argmin(const SearchState& s, Index j, int points) {
  const double hb = s.dictionary().half_bin();
  double best = 0.0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double t = -hb + 2.0 * hb * i / (points - 1);
    const double c = s.cost_at(j, t);
    if (c < best_cost) {
      best_cost = c;
      best = t;
    }
  }
  return best;
}

}  // namespace

TEST(CostAt, NoOpCandidate) {
  auto p = tone_problem(gaussian_sensing(32, 64, 1), QFactor{1}, 5, 0.003, 0.4, 1.0, 1.0);
  const SearchState s(p.a, p.dict, p.x, p.y);
  EXPECT_EQ(s.cost_at(5, 0.0), s.residual().squaredNorm());
}

TEST(CostAt, UnusedColumnsAreFlat) {
  auto p = tone_problem(gaussian_sensing(32, 64, 1), QFactor{1}, 5, 0.003, 0.4, 1.0, 1.0);
  const SearchState s(p.a, p.dict, p.x, p.y);
  const double c0 = s.cost_at(9, -0.005);
  EXPECT_EQ(c0, s.cost_at(9, 0.007));
  EXPECT_EQ(c0, s.residual().squaredNorm());
}

TEST(CostAt, MatchesFullRebuild) {
  Rng r(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 64;
    const QFactor q = trial % 2 ? QFactor{2} : QFactor{1};
    const auto a = gaussian_sensing(32, n, 100 + trial);
    const Index qn = q.atoms(n);
    Vector theta(qn / 2);
    theta[0] = 0.0;
    for (Index j = 1; j < qn / 2; ++j) theta[j] = r.uniform(-0.5 / qn, 0.5 / qn);
    const PerturbedDictionary d(n, q, theta);
    Vector x(qn);
    for (Index k = 0; k < qn; ++k) x[k] = r.normal();
    Vector y(32);
    for (Index i = 0; i < 32; ++i) y[i] = r.normal();
    const SearchState s(a, d, x, y);
    for (int c = 0; c < 10; ++c) {
      const Index j = 1 + static_cast<Index>(r.index(static_cast<std::uint64_t>(qn / 2 - 1)));
      const double t = r.uniform(-0.5 / qn, 0.5 / qn);
      const double naive = (y - a.matrix() * d.with_perturbation(j, t).atoms() * x).squaredNorm();
      ASSERT_NEAR(s.cost_at(j, t), naive, 1e-9 * naive);
    }
  }
}

TEST(CostAt, Errors) {
  auto p = tone_problem(gaussian_sensing(32, 64, 1), QFactor{1}, 5, 0.003, 0.4, 1.0, 1.0);
  const SearchState s(p.a, p.dict, p.x, p.y);
  EXPECT_THROW(s.cost_at(0, 0.0), std::invalid_argument);
  EXPECT_THROW(s.cost_at(32, 0.0), std::out_of_range);
  EXPECT_THROW(s.cost_at(5, 0.01), std::invalid_argument);
}

TEST(Accept, ResidualStaysInSync) {
  Rng r(4);
  const auto a = gaussian_sensing(40, 64, 5);
  Vector x(64);
  for (Index k = 0; k < 64; ++k) x[k] = r.normal();
  Vector y(40);
  for (Index i = 0; i < 40; ++i) y[i] = r.normal();
  SearchState s(a, PerturbedDictionary::unperturbed(64), x, y);
  for (int step = 0; step < 200; ++step) {
    const Index j = 1 + static_cast<Index>(r.index(31));
    s.accept(j, r.uniform(-0.5 / 64, 0.5 / 64));
  }
  const Vector full = s.full_residual();
  EXPECT_LE((s.residual() - full).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(GoldenSearch, RecoversOffsetOnIdentity) {
  const Index n = 256;
  auto p = tone_problem(identity_operator(n), QFactor{1}, 40, 0.3 / n, 1.1, 1.0, 1.0);
  const SearchState s(p.a, p.dict, p.x, p.y);
  const double tol = default_search_tol(s.dictionary());
  EXPECT_NEAR(golden_search(s, 40), 0.3 / n, tol);
  EXPECT_NEAR(grid_argmin(s, 40, 2001), 0.3 / n, 1.0 / (2000.0 * n));
}

TEST(GoldenSearch, ExactModelStaysPut) {
  const Index n = 128;
  auto p = tone_problem(identity_operator(n), QFactor{1}, 17, 0.0, 0.3, 1.0, 1.0);
  const SearchState s(p.a, p.dict, p.x, p.y);
  EXPECT_NEAR(golden_search(s, 17), 0.0, default_search_tol(s.dictionary()));
}

TEST(GoldenSearch, AmplitudeMismatchKeepsTrueMinimum) {
  // f = 0.2 at N = 256 is bin 51 plus 0.2/N; estimate is a quarter of the true amplitude.
  const Index n = 256;
  auto p = tone_problem(identity_operator(n), QFactor{1}, 51, 0.2 / n, 0.0, 4.0, 1.0);
  const SearchState s(p.a, p.dict, p.x, p.y);
  EXPECT_NEAR(golden_search(s, 51), 0.2 / n, 1.0 / (2000.0 * n));
}

TEST(GoldenSearch, AgreesWithGridOn100Problems) {
  Rng r(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 128;
    const QFactor q = trial % 3 == 0 ? QFactor{2} : QFactor{1};
    const Index qn = q.atoms(n);
    const Index j = 1 + static_cast<Index>(r.index(static_cast<std::uint64_t>(qn / 2 - 2)));
    const double theta = r.uniform(-0.45 / qn, 0.45 / qn);
    const double phi = r.uniform(0.0, 2.0 * std::numbers::pi);
    const double amp_ratio = r.uniform(0.5, 1.5);
    auto p = tone_problem(gaussian_sensing(64, n, 5000 + trial), q, j, theta, phi, 1.0, amp_ratio);
    const SearchState s(p.a, p.dict, p.x, p.y);
    const double tol = default_search_tol(s.dictionary());
    const double grid_step = 1.0 / (2000.0 * qn);
    const double g = golden_search(s, j);
    const double brute = grid_argmin(s, j, 2001);
    ASSERT_LE(std::abs(g - brute), std::max(tol, grid_step)) << "trial " << trial;
    ASSERT_LE(s.cost_at(j, g), s.residual().squaredNorm() + 1e-12);
  }
}

TEST(GoldenSearch, NeverWorsens) {
  Rng r(8);
  const auto a = gaussian_sensing(40, 64, 9);
  Vector x(64);
  for (Index k = 0; k < 64; ++k) x[k] = r.normal();
  Vector y(40);
  for (Index i = 0; i < 40; ++i) y[i] = r.normal();
  SearchState s(a, PerturbedDictionary::unperturbed(64), x, y);
  for (Index j = 1; j < 32; ++j) {
    const double before = s.residual().squaredNorm();
    s.accept(j, golden_search(s, j));
    ASSERT_LE(s.residual().squaredNorm(), before + 1e-12 * std::max(1.0, before));
  }
}
