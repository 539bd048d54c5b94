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

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "avec/digest.h"
#include "avec/kernels.h"
#include "avec/strings.h"

namespace avec {
namespace {

constexpr std::string_view kProofMagic = "avec-proof-v1";
constexpr uint64_t kMinAttackSamples = 10'000;
constexpr size_t kAttackChunk = 1 << 16;

void PutField(std::string& out, std::string_view bytes) {
  const uint32_t n = static_cast<uint32_t>(bytes.size());
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<char>((n >> shift) & 0xFF));
  }
  out.append(bytes);
}

std::string BigEndian(uint64_t value, int bytes) {
  std::string out;
  for (int shift = 8 * (bytes - 1); shift >= 0; shift -= 8) {
    out.push_back(static_cast<char>((value >> shift) & 0xFF));
  }
  return out;
}

}  // namespace

std::string_view LevelName(PrivatizationLevel level) {
  switch (level) {
    case PrivatizationLevel::kHigh:
      return "High";
    case PrivatizationLevel::kModerate:
      return "Moderate";
    case PrivatizationLevel::kLight:
      return "Light";
    case PrivatizationLevel::kNone:
      return "None";
  }
  return "?";
}

PrivatizationLevel LevelFor(double per_entity_epsilon,
                            const LevelThresholds& thresholds) {
  if (per_entity_epsilon < thresholds.high_below) {
    return PrivatizationLevel::kHigh;
  }
  if (per_entity_epsilon < thresholds.moderate_below) {
    return PrivatizationLevel::kModerate;
  }
  if (per_entity_epsilon < thresholds.light_below) {
    return PrivatizationLevel::kLight;
  }
  return PrivatizationLevel::kNone;
}

double KaryRrKeepProbability(double epsilon, uint32_t k) {
  return 1.0 / (1.0 + (k - 1.0) * std::exp(-epsilon));
}

double KaryRrOtherProbability(double epsilon, uint32_t k) {
  const double e = std::exp(-epsilon);
  return e / (1.0 + (k - 1.0) * e);
}

uint32_t KaryRrApply(uint32_t vocab_id, uint32_t k, double epsilon,
                     double u) {
  uint32_t out = 0;
  kernels::ScalarKernels().kary_rr(
      {&vocab_id, 1}, k, KaryRrKeepProbability(epsilon, k),
      KaryRrOtherProbability(epsilon, k), {&u, 1}, {&out, 1});
  return out;
}

absl::StatusOr<uint32_t> KaryRrPrivatize(uint32_t vocab_id, uint32_t k,
                                         double epsilon, RandomStream& rng) {
  if (k < 2) return absl::InvalidArgumentError("k-ary RR needs k >= 2");
  if (vocab_id >= k) {
    return absl::InvalidArgumentError(
        absl::StrCat("vocab id ", vocab_id, " out of range for k=", k));
  }
  if (!(epsilon >= 0.0)) {
    return absl::InvalidArgumentError("epsilon must be >= 0");
  }
  return KaryRrApply(vocab_id, k, epsilon, rng.Uniform());
}

double UtilityCeiling(double epsilon, uint32_t k) {
  return KaryRrKeepProbability(epsilon, k);
}

absl::StatusOr<uint32_t> BayesRecover(uint32_t observed, uint32_t k,
                                      double epsilon,
                                      std::span<const double> prior) {
  if (k < 2 || prior.size() != k || observed >= k) {
    return absl::InvalidArgumentError("prior must have k >= 2 entries");
  }
  double total = 0.0;
  for (double p : prior) {
    if (!(p >= 0.0)) return absl::InvalidArgumentError("negative prior mass");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    return absl::InvalidArgumentError("prior must sum to 1");
  }
  const double keep = KaryRrKeepProbability(epsilon, k);
  const double other = KaryRrOtherProbability(epsilon, k);
  uint32_t best = 0;
  double best_score = -1.0;
  for (uint32_t t = 0; t < k; ++t) {
    const double score = prior[t] * (t == observed ? keep : other);
    if (score > best_score) {
      best_score = score;
      best = t;
    }
  }
  return best;
}

std::string_view RecoveryEstimatorName(RecoveryEstimator estimator) {
  switch (estimator) {
    case RecoveryEstimator::kBayes:
      return "bayes";
    case RecoveryEstimator::kFixedToken:
      return "fixed-token";
    case RecoveryEstimator::kShifted:
      return "shifted";
    case RecoveryEstimator::kUniformGuess:
      return "uniform-guess";
  }
  return "?";
}

absl::StatusOr<RecoveryEstimate> EstimateRecoveryAccuracy(
    double epsilon, uint32_t k, uint64_t n_samples, RandomStream& rng,
    RecoveryEstimator estimator) {
  if (k < 2) return absl::InvalidArgumentError("k-ary RR needs k >= 2");
  if (!(epsilon >= 0.0)) {
    return absl::InvalidArgumentError("epsilon must be >= 0");
  }
  if (n_samples < kMinAttackSamples) {
    return absl::InvalidArgumentError("need at least 10^4 samples");
  }
  const kernels::KernelTable& kt = kernels::Active();
  const double keep = KaryRrKeepProbability(epsilon, k);
  const double other = KaryRrOtherProbability(epsilon, k);
  std::vector<double> u_truth(kAttackChunk), u_release(kAttackChunk),
      u_guess(kAttackChunk);
  std::vector<uint32_t> truth(kAttackChunk), released(kAttackChunk),
      guess(kAttackChunk);
  const double dk = static_cast<double>(k);

  uint64_t correct = 0;
  for (uint64_t done = 0; done < n_samples;) {
    const size_t n = static_cast<size_t>(
        std::min<uint64_t>(kAttackChunk, n_samples - done));
    rng.FillUniform({u_truth.data(), n});
    rng.FillUniform({u_release.data(), n});
    for (size_t i = 0; i < n; ++i) {
      truth[i] = std::min(static_cast<uint32_t>(u_truth[i] * dk), k - 1);
    }
    kt.kary_rr({truth.data(), n}, k, keep, other, {u_release.data(), n},
               {released.data(), n});
    if (estimator == RecoveryEstimator::kUniformGuess) {
      rng.FillUniform({u_guess.data(), n});
    }
    for (size_t i = 0; i < n; ++i) {
      switch (estimator) {
        case RecoveryEstimator::kBayes:
          guess[i] = released[i];
          break;
        case RecoveryEstimator::kFixedToken:
          guess[i] = 0;
          break;
        case RecoveryEstimator::kShifted:
          guess[i] = released[i] + 1 == k ? 0 : released[i] + 1;
          break;
        case RecoveryEstimator::kUniformGuess:
          guess[i] = std::min(static_cast<uint32_t>(u_guess[i] * dk), k - 1);
          break;
      }
    }
    correct += kt.count_equal({truth.data(), n}, {guess.data(), n});
    done += n;
  }
  RecoveryEstimate est;
  est.samples = n_samples;
  est.accuracy = static_cast<double>(correct) / static_cast<double>(n_samples);
  est.sigma = std::sqrt(est.accuracy * (1.0 - est.accuracy) /
                        static_cast<double>(n_samples));
  return est;
}

std::string CanonicalSerialize(const TransformParams& params,
                               std::span<const Replacement> replacements) {
  std::string out;
  PutField(out, kProofMagic);
  PutField(out, params.policy_id);
  PutField(out, FormatDouble(params.epsilon_effective));
  PutField(out, BigEndian(params.k, 4));
  PutField(out, BigEndian(static_cast<uint64_t>(params.timestamp), 8));
  PutField(out, BigEndian(replacements.size(), 4));
  for (const Replacement& r : replacements) {
    PutField(out, CategoryName(r.category));
    PutField(out, BigEndian(r.vocab_id, 4));
  }
  return out;
}

std::string ProofDigestHex(const TransformParams& params,
                           std::span<const Replacement> replacements) {
  return HexEncode(Sha256(CanonicalSerialize(params, replacements)));
}

TransformationProof MakeProof(TransformParams params,
                              std::vector<Replacement> replacements) {
  TransformationProof proof;
  proof.digest_hex = ProofDigestHex(params, replacements);
  proof.declared_params = std::move(params);
  proof.replacements = std::move(replacements);
  return proof;
}

absl::StatusOr<TransformOutcome> TransformQuery(
    std::string_view text, std::span<const Entity> entities,
    double epsilon_effective, const TransformParams& params,
    const VocabularySet& vocabularies, RandomStream& rng,
    const LevelThresholds& thresholds) {
  if (!(epsilon_effective >= 0.0)) {
    return absl::InvalidArgumentError("epsilon_effective must be >= 0");
  }
  const size_t m = entities.size();
  const double per_entity =
      epsilon_effective / static_cast<double>(std::max<size_t>(m, 1));

  TransformOutcome outcome;
  TransformedQuery& tq = outcome.query;
  tq.entity_count = m;
  tq.per_entity_epsilon = per_entity;
  tq.privatization_level =
      m == 0 ? PrivatizationLevel::kNone : LevelFor(per_entity, thresholds);

  TransformParams declared = params;
  declared.epsilon_effective = epsilon_effective;
  declared.k = vocabularies.MinSize();
  if (m > 0) {
    declared.k = vocabularies.For(entities[0].category).size();
    for (const Entity& e : entities) {
      declared.k = std::min(declared.k, vocabularies.For(e.category).size());
    }
  }

  std::vector<Replacement> replacements;
  replacements.reserve(m);
  size_t cursor = 0;
  for (const Entity& e : entities) {
    if (e.begin < cursor || e.end > text.size() || e.begin > e.end) {
      return absl::InvalidArgumentError("entity spans overlap or overrun");
    }
    const Vocabulary& vocab = vocabularies.For(e.category);
    absl::StatusOr<uint32_t> out_id =
        KaryRrPrivatize(e.vocab_id, vocab.size(), per_entity, rng);
    if (!out_id.ok()) return out_id.status();
    tq.text.append(text.substr(cursor, e.begin - cursor));
    tq.text.append(vocab.token(*out_id));
    cursor = e.end;
    replacements.push_back({e.category, *out_id});
    outcome.charges.push_back(MechanismSpec::KaryRr(per_entity, vocab.size()));
  }
  tq.text.append(text.substr(cursor));
  tq.proof = MakeProof(std::move(declared), std::move(replacements));
  return outcome;
}

Overhead SimulateTranslationOverhead(size_t text_length, RandomStream& rng,
                                     const TranslationCostModel& model) {
  const double len = static_cast<double>(text_length);
  Overhead o;
  o.latency_ms =
      rng.Uniform(model.latency_base_min_ms, model.latency_base_max_ms) +
      model.latency_per_char_ms * len;
  o.cost_units = rng.Uniform(model.cost_base_min, model.cost_base_max) +
                 model.cost_per_char * len;
  return o;
}

}  // namespace avec
