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

#ifndef AVEC_VERIFICATION_H_
#define AVEC_VERIFICATION_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "avec/random.h"
#include "avec/transform.h"

namespace avec {

enum class VerificationStatus { kVerified, kRejected, kNotApplicable };
enum class RejectReason { kNone, kDigestMismatch, kMalformed };

struct VerificationResult {
  VerificationStatus status = VerificationStatus::kNotApplicable;
  RejectReason reason = RejectReason::kNone;

  bool verified() const { return status == VerificationStatus::kVerified; }
  // "Verified", "Rejected(DigestMismatch)", "Rejected(Malformed)",
  // "NotApplicable".
  std::string_view Name() const;
};

// Verified iff SHA-256(CanonicalSerialize(declared_params, replacements))
// equals the carried digest. Structurally invalid proofs (bad digest
// encoding, negative or NaN ε, k < 2, empty policy id) are Malformed.
VerificationResult VerifyProof(const TransformationProof& proof);

// A translation channel over vocabulary ids: writes one output per input,
// consuming the matching uniform.
using TokenChannel = std::function<void(std::span<const uint32_t> in,
                                        std::span<const double> u,
                                        std::span<uint32_t> out)>;

TokenChannel HonestRrChannel(uint32_t k, double epsilon);
// Passes tokens through untouched while declaring the same parameters.
TokenChannel IdentityChannel();

struct ChannelTestOptions {
  uint32_t k = 8;
  double epsilon = 1.0;
  uint64_t samples_per_input = 200'000;
  // The adjacent pair under test; both orderings are checked.
  uint32_t input = 0;
  uint32_t neighbour = 1;
  double z_threshold = 3.0;
};

struct ChannelTestResult {
  bool flagged = false;
  // Largest z of p̂[y|a] - e^ε p̂[y|b] over outputs y and both orderings.
  double max_z = 0.0;
  // p̂[y|a] / p̂[y|b] at that worst cell (+inf when p̂[y|b] = 0).
  double worst_ratio = 0.0;
  uint32_t worst_output = 0;
};

// Empirical ε-DP check on one adjacent pair: flags when some output is more
// than e^ε times likelier under one input than the other, by more than
// z_threshold Monte Carlo standard errors.
ChannelTestResult EmpiricalChannelTest(const TokenChannel& channel,
                                       const ChannelTestOptions& options,
                                       RandomStream& rng);

struct AgentReport {
  std::string name;
  VerificationResult verification;
  ChannelTestResult channel;
  std::string digest_hex;
};

struct HashOnlyDemoReport {
  std::string query;
  double declared_epsilon = 0.0;
  uint32_t k = 0;
  AgentReport honest;
  AgentReport cheating;
  bool digests_equal_when_replacements_coincide = false;

  // Both proofs verify; only the cheater fails the channel test.
  bool CounterexampleReproduced() const;
};

struct HashDemoOptions {
  std::string query = "Refill for John Smith on 2024-01-15";
  double declared_epsilon = 1.0;
  uint64_t channel_samples = 200'000;
  uint64_t seed = 1729;
};

// Two translation agents with identical declared parameters: one applies RR
// at the declared ε, the other forwards entities unchanged. The verifier
// accepts both; only a relational test on neighbouring inputs separates them.
HashOnlyDemoReport HashOnlyLimitationDemo(const HashDemoOptions& options = {});

}  // namespace avec

#endif  // AVEC_VERIFICATION_H_
