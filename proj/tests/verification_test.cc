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

#include "avec/verification.h"

#include <cmath>
#include <vector>

#include "avec/entities.h"
#include "avec/random.h"
#include "avec/transform.h"
#include "gtest/gtest.h"

namespace avec {
namespace {

TransformationProof HonestProof(uint64_t seed) {
  const std::string q = "Refill for John Smith on 2024-01-15";
  std::vector<Entity> entities = EntityDetector::Default().Detect(q);
  const VocabularySet vocab = VocabularySet::Build(entities, 8, 64);
  vocab.AssignIds(entities);
  TransformParams params;
  params.policy_id = "avec-high";
  params.timestamp = 1704067200;
  RandomStream rng(seed, 0, 0);
  return TransformQuery(q, entities, 0.7, params, vocab, rng)->query.proof;
}

TEST(VerifyProofTest, HonestProofVerifies) {
  for (uint64_t s = 0; s < 100; ++s) {
    const VerificationResult r = VerifyProof(HonestProof(s));
    EXPECT_TRUE(r.verified());
    EXPECT_EQ(r.Name(), "Verified");
  }
}

TEST(VerifyProofTest, AlteredEpsilonRejected) {
  TransformationProof p = HonestProof(1);
  p.declared_params.epsilon_effective = 5.0;
  const VerificationResult r = VerifyProof(p);
  EXPECT_EQ(r.status, VerificationStatus::kRejected);
  EXPECT_EQ(r.reason, RejectReason::kDigestMismatch);
  EXPECT_EQ(r.Name(), "Rejected(DigestMismatch)");
}

TEST(VerifyProofTest, FlippedDigestCharRejected) {
  TransformationProof p = HonestProof(2);
  p.digest_hex[10] = p.digest_hex[10] == 'a' ? 'b' : 'a';
  EXPECT_EQ(VerifyProof(p).reason, RejectReason::kDigestMismatch);
}

TEST(VerifyProofTest, MalformedProofs) {
  TransformationProof p = HonestProof(3);
  p.digest_hex = "xyz";
  EXPECT_EQ(VerifyProof(p).reason, RejectReason::kMalformed);
  p = HonestProof(3);
  p.digest_hex[0] = 'A';
  EXPECT_EQ(VerifyProof(p).reason, RejectReason::kMalformed);
  p = HonestProof(3);
  p.declared_params.epsilon_effective = std::nan("");
  EXPECT_EQ(VerifyProof(p).Name(), "Rejected(Malformed)");
  p = HonestProof(3);
  p.declared_params.k = 1;
  EXPECT_EQ(VerifyProof(p).reason, RejectReason::kMalformed);
  p = HonestProof(3);
  p.declared_params.policy_id.clear();
  EXPECT_EQ(VerifyProof(p).reason, RejectReason::kMalformed);
}

// Random single-field mutations of a valid proof are never accepted.
TEST(VerifyProofTest, MutationFuzzHasNoFalseAccepts) {
  RandomStream rng(99, 0, 0);
  const TransformationProof base = HonestProof(4);
  int accepted = 0;
  for (int i = 0; i < 10'000; ++i) {
    TransformationProof p = base;
    const double u = rng.Uniform();
    const uint64_t bits = rng.NextBits();
    switch (static_cast<int>(rng.Uniform() * 6)) {
      case 0:
        p.declared_params.epsilon_effective = std::nextafter(
            p.declared_params.epsilon_effective, u < 0.5 ? 0.0 : 10.0) + (u < 0.25 ? u : 0);
        break;
      case 1:
        p.declared_params.k ^= 1u << (bits % 6);
        break;
      case 2:
        p.declared_params.timestamp ^= int64_t{1} << (bits % 40);
        break;
      case 3:
        p.declared_params.policy_id[bits % p.declared_params.policy_id.size()] ^=
            static_cast<char>(1 << (bits % 6));
        break;
      case 4:
        p.replacements[bits % p.replacements.size()].vocab_id ^= 1u << (bits % 5);
        break;
      default: {
        char& c = p.digest_hex[bits % 64];
        c = c == '0' ? '1' : '0';
        break;
      }
    }
    accepted += VerifyProof(p).verified();
  }
  EXPECT_EQ(accepted, 0);
}

TEST(ChannelTestTest, HonestPassesIdentityFlagged) {
  RandomStream rng(5, 0, 0);
  ChannelTestOptions opts;
  const ChannelTestResult honest =
      EmpiricalChannelTest(HonestRrChannel(opts.k, opts.epsilon), opts, rng);
  EXPECT_FALSE(honest.flagged);
  const ChannelTestResult identity = EmpiricalChannelTest(IdentityChannel(), opts, rng);
  EXPECT_TRUE(identity.flagged);
  EXPECT_GT(identity.worst_ratio, std::exp(opts.epsilon));
}

TEST(ChannelTestTest, DetectsUnderstatedEpsilon) {
  RandomStream rng(6, 0, 0);
  ChannelTestOptions opts;
  opts.epsilon = 1.0;
  const ChannelTestResult r =
      EmpiricalChannelTest(HonestRrChannel(opts.k, 2.0), opts, rng);
  EXPECT_TRUE(r.flagged);
}

TEST(HashDemoTest, CounterexampleReproduced) {
  const HashOnlyDemoReport r = HashOnlyLimitationDemo();
  EXPECT_TRUE(r.honest.verification.verified());
  EXPECT_TRUE(r.cheating.verification.verified());
  EXPECT_FALSE(r.honest.channel.flagged);
  EXPECT_TRUE(r.cheating.channel.flagged);
  EXPECT_TRUE(r.digests_equal_when_replacements_coincide);
  EXPECT_TRUE(r.CounterexampleReproduced());
}

TEST(HashDemoTest, StableAcrossSeeds) {
  for (uint64_t seed : {1u, 2u, 3u}) {
    HashDemoOptions opts;
    opts.seed = seed;
    EXPECT_TRUE(HashOnlyLimitationDemo(opts).CounterexampleReproduced()) << seed;
  }
}

}  // namespace
}  // namespace avec
