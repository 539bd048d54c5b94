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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "avec/entities.h"
#include "avec/kernels.h"

namespace avec {
namespace {

constexpr size_t kChunk = 1 << 16;
constexpr int kMaxCoincidenceTries = 10'000;

bool IsLowerHex(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
  });
}

std::vector<uint64_t> OutputCounts(const TokenChannel& channel, uint32_t k,
                                   uint32_t input, uint64_t n,
                                   RandomStream& rng) {
  std::vector<uint64_t> counts(k, 0);
  std::vector<uint32_t> in(kChunk, input), out(kChunk);
  std::vector<double> u(kChunk);
  for (uint64_t done = 0; done < n;) {
    const size_t m = static_cast<size_t>(std::min<uint64_t>(kChunk, n - done));
    rng.FillUniform({u.data(), m});
    channel({in.data(), m}, {u.data(), m}, {out.data(), m});
    for (size_t i = 0; i < m; ++i) ++counts[out[i] < k ? out[i] : 0];
    done += m;
  }
  return counts;
}

}  // namespace

std::string_view VerificationResult::Name() const {
  switch (status) {
    case VerificationStatus::kVerified:
      return "Verified";
    case VerificationStatus::kNotApplicable:
      return "NotApplicable";
    case VerificationStatus::kRejected:
      return reason == RejectReason::kMalformed ? "Rejected(Malformed)"
                                                : "Rejected(DigestMismatch)";
  }
  return "?";
}

VerificationResult VerifyProof(const TransformationProof& proof) {
  const TransformParams& p = proof.declared_params;
  if (proof.digest_hex.size() != 64 || !IsLowerHex(proof.digest_hex) ||
      !(p.epsilon_effective >= 0.0) || p.k < 2 || p.policy_id.empty()) {
    return {VerificationStatus::kRejected, RejectReason::kMalformed};
  }
  if (ProofDigestHex(p, proof.replacements) != proof.digest_hex) {
    return {VerificationStatus::kRejected, RejectReason::kDigestMismatch};
  }
  return {VerificationStatus::kVerified, RejectReason::kNone};
}

TokenChannel HonestRrChannel(uint32_t k, double epsilon) {
  const double keep = KaryRrKeepProbability(epsilon, k);
  const double other = KaryRrOtherProbability(epsilon, k);
  return [k, keep, other](std::span<const uint32_t> in,
                          std::span<const double> u,
                          std::span<uint32_t> out) {
    kernels::Active().kary_rr(in, k, keep, other, u, out);
  };
}

TokenChannel IdentityChannel() {
  return [](std::span<const uint32_t> in, std::span<const double>,
            std::span<uint32_t> out) {
    std::copy(in.begin(), in.end(), out.begin());
  };
}

ChannelTestResult EmpiricalChannelTest(const TokenChannel& channel,
                                       const ChannelTestOptions& options,
                                       RandomStream& rng) {
  const uint64_t n = options.samples_per_input;
  const std::vector<uint64_t> ca =
      OutputCounts(channel, options.k, options.input, n, rng);
  const std::vector<uint64_t> cb =
      OutputCounts(channel, options.k, options.neighbour, n, rng);
  const double bound = std::exp(options.epsilon);
  const double dn = static_cast<double>(n);

  ChannelTestResult result;
  result.max_z = -std::numeric_limits<double>::infinity();
  auto check = [&](const std::vector<uint64_t>& num,
                   const std::vector<uint64_t>& den) {
    for (uint32_t y = 0; y < options.k; ++y) {
      const double p1 = static_cast<double>(num[y]) / dn;
      const double p2 = static_cast<double>(den[y]) / dn;
      const double excess = p1 - bound * p2;
      const double se = std::sqrt(p1 * (1.0 - p1) / dn +
                                  bound * bound * p2 * (1.0 - p2) / dn);
      double z;
      if (se > 0.0) {
        z = excess / se;
      } else {
        z = excess > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
      }
      if (z > result.max_z) {
        result.max_z = z;
        result.worst_output = y;
        result.worst_ratio = p2 > 0.0
                                 ? p1 / p2
                                 : std::numeric_limits<double>::infinity();
      }
    }
  };
  check(ca, cb);
  check(cb, ca);
  result.flagged = result.max_z > options.z_threshold;
  return result;
}

bool HashOnlyDemoReport::CounterexampleReproduced() const {
  return honest.verification.verified() && cheating.verification.verified() &&
         !honest.channel.flagged && cheating.channel.flagged;
}

HashOnlyDemoReport HashOnlyLimitationDemo(const HashDemoOptions& options) {
  HashOnlyDemoReport report;
  report.query = options.query;
  report.declared_epsilon = options.declared_epsilon;

  std::vector<Entity> entities =
      EntityDetector::Default().Detect(options.query);
  const VocabularySet vocab = VocabularySet::Build(entities, 8, 64);
  vocab.AssignIds(entities);

  TransformParams params;
  params.policy_id = "demo-policy";
  params.timestamp = 1704067200;

  RandomStream rng(options.seed, 0, static_cast<uint32_t>(StreamTag::kDemo));

  // Honest agent: real RR at the declared budget.
  absl::StatusOr<TransformOutcome> honest = TransformQuery(
      options.query, entities, options.declared_epsilon, params, vocab, rng);
  const TransformationProof& honest_proof = honest->query.proof;

  // Cheating agent: forwards entities unchanged but declares the same
  // parameters, so its proof is built from the very same declared fields.
  std::vector<Replacement> identity;
  for (const Entity& e : entities) identity.push_back({e.category, e.vocab_id});
  const TransformationProof cheating_proof =
      MakeProof(honest_proof.declared_params, identity);

  report.k = honest_proof.declared_params.k;
  const double per_entity =
      options.declared_epsilon /
      static_cast<double>(std::max<size_t>(entities.size(), 1));

  ChannelTestOptions channel_options;
  channel_options.k = report.k;
  channel_options.epsilon = per_entity;
  channel_options.samples_per_input = options.channel_samples;

  report.honest = {"honest-rr", VerifyProof(honest_proof),
                   EmpiricalChannelTest(HonestRrChannel(report.k, per_entity),
                                        channel_options, rng),
                   honest_proof.digest_hex};
  report.cheating = {"identity", VerifyProof(cheating_proof),
                     EmpiricalChannelTest(IdentityChannel(), channel_options,
                                          rng),
                     cheating_proof.digest_hex};

  // Rerun the honest agent until its random output happens to equal the
  // identity output; the proofs are then byte-identical.
  for (int i = 0; i < kMaxCoincidenceTries; ++i) {
    absl::StatusOr<TransformOutcome> retry = TransformQuery(
        options.query, entities, options.declared_epsilon, params, vocab, rng);
    if (retry->query.proof.replacements == identity) {
      report.digests_equal_when_replacements_coincide =
          retry->query.proof.digest_hex == cheating_proof.digest_hex;
      break;
    }
  }
  return report;
}

}  // namespace avec
