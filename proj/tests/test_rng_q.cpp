#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "acs/q_factor.hpp"
#include "acs/rng.hpp"

using namespace acs;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, DerivedSeedsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(derive_seed(7, s));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(derive_seed(1, kSceneStream), derive_seed(1, kSensingStream));
}

TEST(Rng, UniformInUnitInterval) {
  Rng r(3);
  double mean = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    mean += u;
  }
  EXPECT_NEAR(mean / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Rng, IndexCoversRangeUniformly) {
  Rng r(5);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[r.index(7)];
  for (int c : counts) EXPECT_NEAR(c, n / 7.0, 5.0 * std::sqrt(n / 7.0));
  EXPECT_THROW(r.index(0), std::invalid_argument);
}

TEST(Rng, NormalMoments) {
  Rng r(11);
  const int n = 400000;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s1 / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 0.01);
  EXPECT_NEAR(s4 / n, 3.0, 0.05);
}

TEST(QFactor, ReducesAndParses) {
  EXPECT_EQ(QFactor(6, 4), QFactor(3, 2));
  EXPECT_EQ(QFactor::parse("3/2"), QFactor(3, 2));
  EXPECT_EQ(QFactor::parse("1.5"), QFactor(3, 2));
  EXPECT_EQ(QFactor::parse("4"), QFactor(4));
  EXPECT_EQ(QFactor(3, 2).str(), "3/2");
  EXPECT_DOUBLE_EQ(QFactor(3, 2).value(), 1.5);
  EXPECT_THROW(QFactor::parse("x"), std::invalid_argument);
  EXPECT_THROW(QFactor(1, 2), std::invalid_argument);
}

TEST(QFactor, AtomCount) {
  EXPECT_EQ(QFactor(1).atoms(256), 256);
  EXPECT_EQ(QFactor(4).atoms(256), 1024);
  EXPECT_EQ(QFactor(3, 2).atoms(256), 384);
  EXPECT_THROW(QFactor(3, 2).atoms(255), std::invalid_argument);  // non-integer
  EXPECT_THROW(QFactor(1).atoms(255), std::invalid_argument);     // odd
}
