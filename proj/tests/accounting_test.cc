//
// Copyright 2026 The AVEC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "avec/accounting.h"

#include <cmath>
#include <vector>

#include "audit.h"
#include "gtest/gtest.h"

namespace avec {
namespace {

TEST(KaryRrRdpTest, ZeroEpsilonIsZero) {
  for (uint32_t k : {2u, 8u, 64u}) {
    for (double a : DefaultAlphaGrid()) EXPECT_EQ(*KaryRrRdp(0.0, k, a), 0.0);
  }
}

TEST(KaryRrRdpTest, MatchesBruteForceOnGrid) {
  for (double eps : {0.1, 1.0, 5.0}) {
    for (uint32_t k : {2u, 8u, 64u}) {
      const auto [p, q] = testing::KaryRrNeighbours(eps, k);
      for (double a : DefaultAlphaGrid()) {
        const double oracle =
            static_cast<double>(testing::RenyiDivergence(p, q, a));
        EXPECT_NEAR(*KaryRrRdp(eps, k, a), oracle, 1e-12)
            << "eps=" << eps << " k=" << k << " alpha=" << a;
      }
    }
  }
}

TEST(KaryRrRdpTest, BinaryCaseAtAlphaTwo) {
  const auto [p, q] = testing::KaryRrNeighbours(1.0, 2);
  EXPECT_NEAR(*KaryRrRdp(1.0, 2, 2.0),
              static_cast<double>(testing::RenyiDivergence(p, q, 2.0)), 1e-12);
}

TEST(KaryRrRdpTest, BoundedByPureEpsilon) {
  double last = 0;
  for (double a : DefaultAlphaGrid()) {
    const double v = *KaryRrRdp(1.0, 8, a);
    EXPECT_LE(v, 1.0);
    EXPECT_GE(v, last);
    last = v;
  }
  EXPECT_NEAR(*KaryRrRdp(1.0, 8, 1e6), 1.0, 1e-4);
}

TEST(KaryRrRdpTest, RejectsBadArguments) {
  EXPECT_FALSE(KaryRrRdp(1.0, 8, 1.0).ok());
  EXPECT_FALSE(KaryRrRdp(1.0, 1, 2.0).ok());
  EXPECT_FALSE(KaryRrRdp(-1.0, 8, 2.0).ok());
}

TEST(BinaryRrRdpTest, EqualsKaryWithTwo) {
  EXPECT_EQ(*BinaryRrRdp(0.0, 2.0), 0.0);
  for (double eps : {0.1, 0.5, 1.0, 5.0}) {
    for (double a : DefaultAlphaGrid()) {
      EXPECT_EQ(*BinaryRrRdp(eps, a), *KaryRrRdp(eps, 2, a));
    }
  }
  const auto [p, q] = testing::KaryRrNeighbours(0.5, 2);
  EXPECT_NEAR(*BinaryRrRdp(0.5, 2.0),
              static_cast<double>(testing::RenyiDivergence(p, q, 2.0)), 1e-12);
}

// Continuous oracle: numeric integration of the Laplace Rényi divergence.
TEST(LaplaceRdpTest, MatchesNumericIntegral) {
  const double b = 30.0, df = 0.3;
  for (double a : {1.5, 2.0, 8.0, 64.0}) {
    long double s = 0;
    const long double h = 1e-3L;
    for (long double x = -2000; x < 2000; x += h) {
      const long double mid = x + h / 2;
      const long double p = std::exp(-std::fabs(mid) / b) / (2 * b);
      const long double q = std::exp(-std::fabs(mid - df) / b) / (2 * b);
      s += std::pow(p, (long double)a) * std::pow(q, 1 - (long double)a) * h;
    }
    const double oracle = static_cast<double>(std::log(s) / (a - 1));
    EXPECT_NEAR(*LaplaceRdp(df, b, a), oracle, 1e-9) << a;
    EXPECT_LE(*LaplaceRdp(df, b, a), df / b + 1e-15);
  }
}

TEST(OdometerTest, HardCap) {
  PrivacyOdometer odo(1.0);
  EXPECT_TRUE(odo.Append(MechanismSpec::KaryRr(0.6, 8)).ok());
  EXPECT_TRUE(odo.Append(MechanismSpec::BinaryRr(0.4)).ok());
  EXPECT_EQ(odo.pure_total(), 1.0);
  const absl::Status s = odo.Append(MechanismSpec::KaryRr(1e-9, 8));
  EXPECT_TRUE(IsCapExceeded(s));
  EXPECT_EQ(odo.entries().size(), 2u);
  EXPECT_EQ(odo.remaining(), 0.0);
  EXPECT_TRUE(odo.Append(MechanismSpec::KaryRr(0.0, 8)).ok());
}

TEST(OdometerTest, RdpTotalsAddUp) {
  PrivacyOdometer odo(10.0);
  ASSERT_TRUE(odo.Append(MechanismSpec::KaryRr(0.5, 8)).ok());
  ASSERT_TRUE(odo.Append(MechanismSpec::BinaryRr(0.5)).ok());
  ASSERT_TRUE(odo.Append(MechanismSpec::Laplace(0.3, 30.0)).ok());
  for (size_t i = 0; i < odo.alpha_grid().size(); ++i) {
    const double a = odo.alpha_grid()[i];
    EXPECT_NEAR(odo.rdp_totals()[i],
                *KaryRrRdp(0.5, 8, a) + *BinaryRrRdp(0.5, a) +
                    *LaplaceRdp(0.3, 30.0, a),
                1e-15);
  }
  EXPECT_NEAR(odo.pure_total(), 1.01, 1e-15);
}

TEST(OdometerTest, UncappedLedger) {
  PrivacyOdometer odo(std::numeric_limits<double>::infinity());
  EXPECT_FALSE(odo.capped());
  for (int i = 0; i < 100; ++i) ASSERT_TRUE(odo.Append(MechanismSpec::KaryRr(5, 8)).ok());
  EXPECT_TRUE(std::isinf(odo.remaining()));
}

TEST(FitSplitBudgetTest, NeverOvershoots) {
  for (double start : {0.0, 0.3, 0.7, 1.1}) {
    for (int count : {1, 2, 3, 7}) {
      const double limit = 1.3;
      const double t = FitSplitBudget(start, limit - start, count, limit);
      double run = start;
      for (int i = 0; i < count; ++i) run += t / count;
      EXPECT_LE(run, limit);
      EXPECT_NEAR(t, limit - start, 1e-12);
    }
  }
}

TEST(ToDpTest, HandValue) {
  const std::vector<double> grid = {10.0};
  const std::vector<double> totals = {1.0};
  const DpGuarantee g = *ToDp(grid, totals, 1e-5);
  EXPECT_NEAR(g.epsilon, 1 + std::log(1e5) / 9, 1e-12);
  EXPECT_NEAR(g.epsilon, 2.27921, 1e-5);
  EXPECT_EQ(g.alpha_star, 10.0);
}

TEST(ToDpTest, EmptyOdometerUsesLargestOrder) {
  PrivacyOdometer odo(1.0);
  const DpGuarantee g = *ToDp(odo, 1e-5);
  EXPECT_NEAR(g.epsilon, std::log(1e5) / 63, 1e-15);
  EXPECT_EQ(g.alpha_star, 64.0);
}

TEST(ToDpTest, TiesGoToSmallerOrder) {
  const std::vector<double> grid = {2.0, 3.0};
  const double l = std::log(1e5);
  const std::vector<double> totals = {l / 2, l};  // both give eps = 1.5 l
  EXPECT_EQ(ToDp(grid, totals, 1e-5)->alpha_star, 2.0);
}

TEST(ToDpTest, MonotoneUnderAppend) {
  PrivacyOdometer odo(100.0);
  double last = ToDp(odo, 1e-5)->epsilon;
  for (int i = 0; i < 20; ++i) {
    ASSERT_TRUE(odo.Append(MechanismSpec::KaryRr(0.1 * (i % 3), 8)).ok());
    const double e = ToDp(odo, 1e-5)->epsilon;
    EXPECT_GE(e, last);
    last = e;
  }
}

TEST(SessionGuaranteeTest, DeltaComposition) {
  PrivacyOdometer odo(10.0);
  ASSERT_TRUE(odo.Append(MechanismSpec::KaryRr(1.0, 8)).ok());
  const DpGuarantee g = *SessionGuarantee(odo, 25, 0.0, 1e-5);
  EXPECT_EQ(g.delta, 1e-5);
  EXPECT_EQ(g.epsilon, ToDp(odo, 1e-5)->epsilon);
  EXPECT_NEAR(SessionGuarantee(odo, 10, 1e-7, 1e-5)->delta, 1.1e-5, 1e-20);
}

TEST(SubsampleAmplifyTest, Values) {
  EXPECT_EQ(SubsampleAmplify(1.0, 1.0), 1.0);
  EXPECT_NEAR(SubsampleAmplify(1.0, 0.5), 0.6201145069582774, 1e-12);
  EXPECT_EQ(SubsampleAmplify(1.0, 0.0), 0.0);
  for (double q = 0; q <= 1.0; q += 0.05) EXPECT_LE(SubsampleAmplify(2.0, q), 2.0 + 1e-15);
}

}  // namespace
}  // namespace avec
