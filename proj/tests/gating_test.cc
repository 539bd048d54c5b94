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

#include "avec/gating.h"

#include <cmath>
#include <string_view>

#include "avec/entities.h"
#include "avec/random.h"
#include "gtest/gtest.h"

namespace avec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(RandomizeGateTest, ZeroEpsilonIsFairCoin) {
  RandomStream rng(1, 0, 0);
  const int n = 1'000'000;
  for (bool g : {false, true}) {
    int ones = 0;
    for (int i = 0; i < n; ++i) ones += *RandomizeGate(g, 0.0, rng);
    EXPECT_NEAR(static_cast<double>(ones) / n, 0.5, 3 * 0.5 / std::sqrt(n));
  }
}

TEST(RandomizeGateTest, OffNeverFlips) {
  RandomStream rng(2, 0, 0);
  for (int i = 0; i < 10000; ++i) {
    ASSERT_TRUE(*RandomizeGate(true, kInf, rng));
    ASSERT_FALSE(*RandomizeGate(false, kInf, rng));
  }
  EXPECT_EQ(rng.draws(), 20000u);
}

TEST(RandomizeGateTest, KeepRateAtOne) {
  RandomStream rng(3, 0, 0);
  const int n = 1'000'000;
  int kept = 0;
  for (int i = 0; i < n; ++i) kept += *RandomizeGate(true, 1.0, rng);
  const double p = std::exp(1.0) / (1 + std::exp(1.0));
  EXPECT_NEAR(p, 0.7310585786300049, 1e-15);
  EXPECT_NEAR(static_cast<double>(kept) / n, p, 3 * std::sqrt(p * (1 - p) / n));
}

TEST(RandomizeGateTest, RejectsNegative) {
  RandomStream rng(4, 0, 0);
  EXPECT_FALSE(RandomizeGate(true, -0.1, rng).ok());
  EXPECT_FALSE(ReleaseGate(true, -0.1, rng).ok());
}

TEST(RandomizeGateTest, ReleaseRecordsCharge) {
  RandomStream rng(5, 0, 0);
  const GateRelease r = *ReleaseGate(true, 0.5, rng);
  EXPECT_TRUE(r.true_bit);
  EXPECT_EQ(r.epsilon_gate, 0.5);
}

TEST(GateBoundTest, Values) {
  EXPECT_EQ(GateAdvantageBound(0.0), 0.0);
  EXPECT_NEAR(GateAdvantageBound(1.0), 0.46211715726000974, 1e-15);
  const double e2 = std::exp(2.0);
  EXPECT_NEAR(GateAdvantageBound(2.0), (e2 - 1) / (e2 + 1), 1e-12);
  EXPECT_NEAR(GateAdvantageBound(2.0), 0.7615941559557649, 1e-12);
}

TEST(GateBoundTest, IncreasingToOne) {
  double last = -1;
  for (double e = 0; e < 20; e += 0.25) {
    const double b = GateAdvantageBound(e);
    EXPECT_GT(b, last);
    EXPECT_LT(b, 1.0 + 1e-15);
    last = b;
  }
  EXPECT_NEAR(GateAdvantageBound(40), 1.0, 1e-15);
}

TEST(GateAdvantageTest, ZeroEpsilonHasNoAdvantage) {
  RandomStream rng(6, 0, 0);
  const AdvantageEstimate a = *EstimateGateAdvantage(0.0, 1'000'000, rng);
  EXPECT_NEAR(a.advantage, 0.0, 3 * a.sigma);
}

TEST(GateAdvantageTest, BayesReachesBoundAtOne) {
  RandomStream rng(7, 0, 0);
  const AdvantageEstimate a = *EstimateGateAdvantage(1.0, 1'000'000, rng);
  EXPECT_NEAR(a.advantage, 0.462, 0.003);
  EXPECT_NEAR(a.advantage, GateAdvantageBound(1.0), 3 * a.sigma);
}

TEST(GateAdvantageTest, NoAttackerBeatsBound) {
  RandomStream rng(8, 0, 0);
  for (double eps : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    for (GateAttacker attacker :
         {GateAttacker::kBayes, GateAttacker::kAlwaysOne, GateAttacker::kInvert,
          GateAttacker::kCoinFlip}) {
      const AdvantageEstimate a =
          *EstimateGateAdvantage(eps, 1'000'000, rng, attacker);
      EXPECT_LE(a.advantage, GateAdvantageBound(eps) + 3 * a.sigma)
          << GateAttackerName(attacker) << " eps=" << eps;
    }
  }
}

TEST(GateAdvantageTest, RequiresEnoughSamples) {
  RandomStream rng(9, 0, 0);
  EXPECT_FALSE(EstimateGateAdvantage(1.0, 100, rng).ok());
}

TEST(GateProbeTest, DateGateSeparatesPair) {
  const EntityDetector& detector = EntityDetector::Default();
  auto has_date = [&](std::string_view q) {
    for (const Entity& e : detector.Detect(q)) {
      if (e.category == EntityCategory::kDate) return true;
    }
    return false;
  };
  const GateProbeReport r = *DeterministicGateProbe(
      has_date, {"Refill for John Smith on 2024-01-15",
                 "Refill for John Smith on 2024-01-16 maybe not"});
  // Both neighbours carry a date: the gate does not separate them.
  EXPECT_EQ(r.witnessed_epsilon, 0.0);
  const GateProbeReport s = *DeterministicGateProbe(
      has_date,
      {"Refill for John Smith on 2024-01-15", "Refill for John Smith on Monday"});
  EXPECT_TRUE(std::isinf(s.witnessed_epsilon));
  EXPECT_FALSE(s.lr_bounded);
  EXPECT_TRUE(s.gate_on_query);
  EXPECT_FALSE(s.gate_on_neighbour);
}

TEST(GateProbeTest, ConstantGateLeaksNothing) {
  const GateProbeReport r = *DeterministicGateProbe(
      [](std::string_view) { return true; }, {"a 2024-01-15", "a Monday"});
  EXPECT_EQ(r.witnessed_epsilon, 0.0);
  EXPECT_TRUE(r.lr_bounded);
}

TEST(GateProbeTest, RejectsRandomizedGate) {
  RandomStream rng(10, 0, 0);
  auto noisy = [&](std::string_view) { return *RandomizeGate(true, 0.0, rng); };
  EXPECT_FALSE(DeterministicGateProbe(noisy, {"a", "b"}).ok());
}

}  // namespace
}  // namespace avec
