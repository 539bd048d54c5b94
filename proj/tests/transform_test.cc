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

#include "avec/transform.h"

#include <cmath>
#include <vector>

#include "avec/digest.h"
#include "avec/entities.h"
#include "avec/random.h"
#include "gtest/gtest.h"

namespace avec {
namespace {

TEST(EntityDetectorTest, NameAndDate) {
  const std::vector<Entity> e =
      EntityDetector::Default().Detect("Refill for John Smith on 2024-01-15");
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].category, EntityCategory::kName);
  EXPECT_EQ(e[0].surface, "John Smith");
  EXPECT_EQ(e[0].begin, 11u);
  EXPECT_EQ(e[1].category, EntityCategory::kDate);
  EXPECT_EQ(e[1].surface, "2024-01-15");
}

TEST(EntityDetectorTest, OtherCategories) {
  const std::vector<Entity> e = EntityDetector::Default().Detect(
      "mail ann.lee@example.org about 12345678 due 3/4/2025");
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0].category, EntityCategory::kOther);
  EXPECT_EQ(e[1].category, EntityCategory::kIdentifier);
  EXPECT_EQ(e[2].category, EntityCategory::kDate);
}

TEST(EntityDetectorTest, NoMatchesAndDeterminism) {
  EXPECT_TRUE(EntityDetector::Default().Detect("what is the weather like").empty());
  const std::string q = "Ask Mary Jones about 2023-12-01 and 998877";
  const auto a = EntityDetector::Default().Detect(q);
  const auto b = EntityDetector::Default().Detect(q);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].surface, b[i].surface);
    EXPECT_EQ(a[i].begin, b[i].begin);
    if (i > 0) {
      EXPECT_GE(a[i].begin, a[i - 1].end);
    }
  }
}

TEST(EntityDetectorTest, RejectsBadPattern) {
  EXPECT_FALSE(EntityDetector::Create({{EntityCategory::kName, "(["}}).ok());
}

TEST(VocabularyTest, PaddingAndTruncation) {
  const Vocabulary v = Vocabulary::Build(EntityCategory::kName, {"B", "A", "A"}, 8, 64);
  EXPECT_EQ(v.size(), 8u);
  EXPECT_EQ(v.token(0), "A");
  EXPECT_EQ(v.token(2), "<Name_00>");
  EXPECT_EQ(v.IdOf("B"), 1u);
  EXPECT_LT(v.IdOf("unseen"), 8u);
  std::vector<std::string> many;
  for (int i = 0; i < 100; ++i) many.push_back("t" + std::to_string(1000 + i));
  EXPECT_EQ(Vocabulary::Build(EntityCategory::kDate, many, 8, 64).size(), 64u);
}

TEST(KaryRrTest, Probabilities) {
  EXPECT_EQ(KaryRrKeepProbability(0.0, 4), 0.25);
  EXPECT_NEAR(KaryRrKeepProbability(std::log(9.0), 10), 0.5, 1e-15);
  EXPECT_NEAR(KaryRrKeepProbability(1.0, 8), 0.27970806737656245, 1e-15);
  EXPECT_NEAR(KaryRrKeepProbability(1.0, 8), 0.27971, 5e-6);
  EXPECT_EQ(UtilityCeiling(0.0, 4), 0.25);
  EXPECT_NEAR(UtilityCeiling(std::log(9.0), 10), 0.5, 1e-15);
  EXPECT_NEAR(UtilityCeiling(5.0, 8), 0.9549587689972905, 1e-15);
  EXPECT_NEAR(UtilityCeiling(5.0, 8), 0.95496, 5e-6);
  EXPECT_NEAR(KaryRrKeepProbability(1.0, 8) + 7 * KaryRrOtherProbability(1.0, 8),
              1.0, 1e-15);
}

TEST(KaryRrTest, UniformAtZeroEpsilon) {
  RandomStream rng(1, 0, 0);
  const int n = 400'000;
  std::vector<int> counts(4);
  for (int i = 0; i < n; ++i) ++counts[*KaryRrPrivatize(2, 4, 0.0, rng)];
  for (int c : counts) {
    EXPECT_NEAR(static_cast<double>(c) / n, 0.25, 3 * std::sqrt(0.25 * 0.75 / n));
  }
  EXPECT_EQ(rng.draws(), static_cast<uint64_t>(n));
}

TEST(KaryRrTest, KeepRateAtOne) {
  RandomStream rng(2, 0, 0);
  const int n = 1'000'000;
  int kept = 0;
  for (int i = 0; i < n; ++i) kept += *KaryRrPrivatize(5, 8, 1.0, rng) == 5;
  const double p = UtilityCeiling(1.0, 8);
  EXPECT_NEAR(static_cast<double>(kept) / n, p, 3 * std::sqrt(p * (1 - p) / n));
}

TEST(KaryRrTest, RejectsBadArguments) {
  RandomStream rng(3, 0, 0);
  EXPECT_FALSE(KaryRrPrivatize(0, 1, 1.0, rng).ok());
  EXPECT_FALSE(KaryRrPrivatize(8, 8, 1.0, rng).ok());
  EXPECT_FALSE(KaryRrPrivatize(0, 8, -1.0, rng).ok());
}

// Channel DP on the pair (0, 1): every output ratio stays within e^eps.
TEST(KaryRrTest, ChannelRatioBounded) {
  const uint32_t k = 8;
  const double eps = 1.0;
  const int n = 1'000'000;
  RandomStream rng(4, 0, 0);
  std::vector<double> c0(k), c1(k);
  for (int i = 0; i < n; ++i) {
    c0[*KaryRrPrivatize(0, k, eps, rng)] += 1.0 / n;
    c1[*KaryRrPrivatize(1, k, eps, rng)] += 1.0 / n;
  }
  const double ee = std::exp(eps);
  for (uint32_t y = 0; y < k; ++y) {
    for (auto [a, b] : {std::pair{c0[y], c1[y]}, std::pair{c1[y], c0[y]}}) {
      const double se = std::sqrt(a * (1 - a) / n + ee * ee * b * (1 - b) / n);
      EXPECT_LE(a - ee * b, 3 * se) << "y=" << y;
    }
  }
}

TEST(BayesRecoverTest, UniformPriorReturnsObserved) {
  const std::vector<double> prior(8, 1.0 / 8);
  for (uint32_t y = 0; y < 8; ++y) EXPECT_EQ(*BayesRecover(y, 8, 1.0, prior), y);
}

TEST(BayesRecoverTest, ZeroEpsilonFollowsPrior) {
  std::vector<double> prior(8, 0.05);
  prior[6] = 0.65;
  EXPECT_EQ(*BayesRecover(2, 8, 0.0, prior), 6u);
  const std::vector<double> flat(8, 1.0 / 8);
  EXPECT_EQ(*BayesRecover(5, 8, 0.0, flat), 0u);
}

TEST(BayesRecoverTest, SkewedPriorDominatesWeakChannel) {
  std::vector<double> prior(8, 0.1 / 7);
  prior[0] = 0.9;
  // posterior(0) ∝ 0.9 q, posterior(3) ∝ (0.1/7) p with p/q = e^0.1.
  EXPECT_GT(0.9, 0.1 / 7 * std::exp(0.1));
  EXPECT_EQ(*BayesRecover(3, 8, 0.1, prior), 0u);
}

TEST(RecoveryTest, BayesMatchesCeilingOthersDoNotBeatIt) {
  RandomStream rng(5, 0, 0);
  for (double eps : {0.1, 1.0, 5.0}) {
    for (uint32_t k : {8u, 16u, 64u}) {
      const double ceiling = UtilityCeiling(eps, k);
      for (RecoveryEstimator est :
           {RecoveryEstimator::kBayes, RecoveryEstimator::kFixedToken,
            RecoveryEstimator::kShifted, RecoveryEstimator::kUniformGuess}) {
        const RecoveryEstimate r =
            *EstimateRecoveryAccuracy(eps, k, 1'000'000, rng, est);
        EXPECT_LE(r.accuracy, ceiling + 3 * r.sigma)
            << RecoveryEstimatorName(est) << " eps=" << eps << " k=" << k;
        if (est == RecoveryEstimator::kBayes) {
          EXPECT_NEAR(r.accuracy, ceiling, 3 * r.sigma) << "eps=" << eps << " k=" << k;
        }
      }
    }
  }
}

TEST(LevelTest, Thresholds) {
  EXPECT_EQ(LevelFor(0.0), PrivatizationLevel::kHigh);
  EXPECT_EQ(LevelFor(0.29), PrivatizationLevel::kHigh);
  EXPECT_EQ(LevelFor(0.3), PrivatizationLevel::kModerate);
  EXPECT_EQ(LevelFor(1.0), PrivatizationLevel::kLight);
  EXPECT_EQ(LevelFor(3.0), PrivatizationLevel::kNone);
}

class TransformQueryTest : public ::testing::Test {
 protected:
  void SetUp() override {
    entities_ = EntityDetector::Default().Detect(kQuery);
    vocab_ = VocabularySet::Build(entities_, 8, 64);
    vocab_.AssignIds(entities_);
    params_.policy_id = "test";
    params_.timestamp = 1704067200;
  }
  static constexpr const char* kQuery = "Refill for John Smith on 2024-01-15";
  std::vector<Entity> entities_;
  VocabularySet vocab_;
  TransformParams params_;
};

TEST_F(TransformQueryTest, SplitsBudgetEqually) {
  RandomStream rng(6, 0, 0);
  const TransformOutcome out =
      *TransformQuery(kQuery, entities_, 0.8, params_, vocab_, rng);
  EXPECT_EQ(out.query.entity_count, 2u);
  EXPECT_DOUBLE_EQ(out.query.per_entity_epsilon, 0.4);
  ASSERT_EQ(out.charges.size(), 2u);
  for (const MechanismSpec& c : out.charges) {
    EXPECT_EQ(c.kind(), MechanismSpec::Kind::kKaryRr);
    EXPECT_DOUBLE_EQ(c.epsilon(), 0.4);
  }
  EXPECT_EQ(out.query.proof.replacements.size(), 2u);
  EXPECT_EQ(out.query.proof.declared_params.epsilon_effective, 0.8);
  EXPECT_EQ(out.query.privatization_level, PrivatizationLevel::kModerate);
  EXPECT_EQ(rng.draws(), 2u);
  EXPECT_EQ(out.query.proof.digest_hex,
            ProofDigestHex(out.query.proof.declared_params,
                           out.query.proof.replacements));
}

TEST_F(TransformQueryTest, NoEntities) {
  RandomStream rng(7, 0, 0);
  const TransformOutcome out =
      *TransformQuery("plain question", {}, 0.5, params_, vocab_, rng);
  EXPECT_EQ(out.query.text, "plain question");
  EXPECT_TRUE(out.query.proof.replacements.empty());
  EXPECT_TRUE(out.charges.empty());
  EXPECT_EQ(out.query.proof.digest_hex.size(), 64u);
}

TEST_F(TransformQueryTest, ZeroBudgetIsUniform) {
  RandomStream rng(8, 0, 0);
  const uint32_t k = vocab_.For(EntityCategory::kName).size();
  std::vector<int> counts(k);
  const int n = 80'000;
  for (int i = 0; i < n; ++i) {
    const TransformOutcome out =
        *TransformQuery(kQuery, entities_, 0.0, params_, vocab_, rng);
    ++counts[out.query.proof.replacements[0].vocab_id];
  }
  const double p = 1.0 / k;
  for (int c : counts) {
    EXPECT_NEAR(static_cast<double>(c) / n, p, 3.5 * std::sqrt(p * (1 - p) / n));
  }
}

TEST_F(TransformQueryTest, ProofNeverContainsSurfaces) {
  RandomStream rng(9, 0, 0);
  for (int i = 0; i < 200; ++i) {
    const TransformOutcome out =
        *TransformQuery(kQuery, entities_, 50.0, params_, vocab_, rng);
    const std::string bytes = CanonicalSerialize(out.query.proof.declared_params,
                                                 out.query.proof.replacements);
    for (const Entity& e : entities_) {
      EXPECT_EQ(bytes.find(e.surface), std::string::npos);
    }
  }
}

TEST(CanonicalSerializeTest, DeterministicAndInjective) {
  TransformParams p{0.5, 8, "policy", 1704067200};
  const std::vector<Replacement> r = {{EntityCategory::kName, 3},
                                      {EntityCategory::kDate, 1}};
  EXPECT_EQ(CanonicalSerialize(p, r), CanonicalSerialize(p, r));
  TransformParams p9 = p;
  p9.k = 9;
  EXPECT_NE(CanonicalSerialize(p, r), CanonicalSerialize(p9, r));
  TransformParams pe = p;
  pe.epsilon_effective = 0.5000000000000001;
  EXPECT_NE(CanonicalSerialize(p, r), CanonicalSerialize(pe, r));
  // Length prefixes keep field boundaries unambiguous.
  TransformParams a{0.5, 8, "ab", 1}, b{0.5, 8, "a", 1};
  EXPECT_NE(CanonicalSerialize(a, {}), CanonicalSerialize(b, {}));
  const std::vector<Replacement> swapped = {r[1], r[0]};
  EXPECT_NE(CanonicalSerialize(p, r), CanonicalSerialize(p, swapped));
}

TEST(DigestTest, Sha256KnownAnswers) {
  EXPECT_EQ(HexEncode(Sha256("abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(HexEncode(Sha256("")),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(TranslationOverheadTest, SupportBounds) {
  RandomStream rng(10, 0, 0);
  double lo = 1e9, hi = -1e9;
  for (int i = 0; i < 100'000; ++i) {
    const Overhead o = SimulateTranslationOverhead(0, rng);
    lo = std::min(lo, o.latency_ms);
    hi = std::max(hi, o.latency_ms);
    ASSERT_GE(o.cost_units, 2e-4);
    ASSERT_LE(o.cost_units, 2.5e-3);
  }
  EXPECT_GE(lo, 5.0);
  EXPECT_LE(hi, 50.0);
  EXPECT_EQ(rng.draws(), 200'000u);
  RandomStream a(11, 0, 0), b(11, 0, 0);
  const Overhead zero = SimulateTranslationOverhead(0, a);
  const Overhead len = SimulateTranslationOverhead(200, b);
  EXPECT_NEAR(len.latency_ms - zero.latency_ms, 200 * 0.05, 1e-12);
  EXPECT_NEAR(len.cost_units - zero.cost_units, 200 * 1e-6, 1e-15);
}

}  // namespace
}  // namespace avec
