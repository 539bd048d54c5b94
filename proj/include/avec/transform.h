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

#ifndef AVEC_TRANSFORM_H_
#define AVEC_TRANSFORM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "avec/accounting.h"
#include "avec/entities.h"
#include "avec/random.h"

namespace avec {

enum class PrivatizationLevel { kHigh, kModerate, kLight, kNone };

std::string_view LevelName(PrivatizationLevel level);

// Per-entity ε below high_below -> High, below moderate_below -> Moderate,
// below light_below -> Light, otherwise None.
struct LevelThresholds {
  double high_below = 0.3;
  double moderate_below = 1.0;
  double light_below = 3.0;
};

PrivatizationLevel LevelFor(double per_entity_epsilon,
                            const LevelThresholds& thresholds = {});

struct TransformParams {
  double epsilon_effective = 0.0;
  uint32_t k = 8;
  std::string policy_id;
  int64_t timestamp = 0;
};

// One privatized entity as it appears in the proof: the category and the
// vocabulary index of the emitted token. Never the original surface.
struct Replacement {
  EntityCategory category = EntityCategory::kOther;
  uint32_t vocab_id = 0;

  bool operator==(const Replacement&) const = default;
};

struct TransformationProof {
  TransformParams declared_params;
  std::vector<Replacement> replacements;
  std::string digest_hex;  // SHA-256 of CanonicalSerialize(...)
};

struct TransformedQuery {
  std::string text;
  TransformationProof proof;
  size_t entity_count = 0;
  double per_entity_epsilon = 0.0;
  PrivatizationLevel privatization_level = PrivatizationLevel::kNone;
};

struct TransformOutcome {
  TransformedQuery query;
  // One KaryRR entry per entity, to be committed to the user's odometer.
  std::vector<MechanismSpec> charges;
};

// Keep probability of k-ary RR, e^ε/(e^ε+k-1); 1 for ε = +inf.
double KaryRrKeepProbability(double epsilon, uint32_t k);
// Probability of each specific other token, 1/(e^ε+k-1).
double KaryRrOtherProbability(double epsilon, uint32_t k);

// Applies k-ary RR with the single uniform u. Preconditions as below.
uint32_t KaryRrApply(uint32_t vocab_id, uint32_t k, double epsilon, double u);
// One uniform draw per call.
absl::StatusOr<uint32_t> KaryRrPrivatize(uint32_t vocab_id, uint32_t k,
                                         double epsilon, RandomStream& rng);

// Best possible recovery accuracy against k-ary RR: e^ε/(e^ε+k-1).
double UtilityCeiling(double epsilon, uint32_t k);

// argmax_t prior(t) * P[observed | t], lowest index on ties.
absl::StatusOr<uint32_t> BayesRecover(uint32_t observed, uint32_t k,
                                      double epsilon,
                                      std::span<const double> prior);

enum class RecoveryEstimator {
  kBayes,        // argmax posterior; the observed id under a uniform prior
  kFixedToken,   // always guesses id 0
  kShifted,      // observed id + 1 mod k
  kUniformGuess, // independent uniform id
};

std::string_view RecoveryEstimatorName(RecoveryEstimator estimator);

struct RecoveryEstimate {
  double accuracy = 0.0;
  double sigma = 0.0;  // Monte Carlo std error of `accuracy`
  uint64_t samples = 0;
};

// Uniform truth over k ids, one k-ary RR release each, scored against the
// estimator's guess. Requires k >= 2 and n_samples >= 10^4.
absl::StatusOr<RecoveryEstimate> EstimateRecoveryAccuracy(
    double epsilon, uint32_t k, uint64_t n_samples, RandomStream& rng,
    RecoveryEstimator estimator = RecoveryEstimator::kBayes);

// Length-prefixed canonical byte encoding of the proof fields. Identical
// inputs give identical bytes on every platform; distinct field tuples give
// distinct bytes.
std::string CanonicalSerialize(const TransformParams& params,
                               std::span<const Replacement> replacements);
std::string ProofDigestHex(const TransformParams& params,
                           std::span<const Replacement> replacements);
TransformationProof MakeProof(TransformParams params,
                              std::vector<Replacement> replacements);

// Privatizes every entity at epsilon_effective / max(m, 1) with its own
// category vocabulary, rewrites the text and issues a proof. `params`
// supplies policy_id and timestamp; epsilon_effective and k are filled in.
// Entities must carry vocab ids (VocabularySet::AssignIds).
absl::StatusOr<TransformOutcome> TransformQuery(
    std::string_view text, std::span<const Entity> entities,
    double epsilon_effective, const TransformParams& params,
    const VocabularySet& vocabularies, RandomStream& rng,
    const LevelThresholds& thresholds = {});

struct TranslationCostModel {
  double latency_base_min_ms = 5.0;
  double latency_base_max_ms = 50.0;
  double latency_per_char_ms = 0.05;
  double cost_base_min = 2e-4;
  double cost_base_max = 2.5e-3;
  double cost_per_char = 1e-6;
};

struct Overhead {
  double latency_ms = 0.0;
  double cost_units = 0.0;
};

// Two draws: latency base, then cost base.
Overhead SimulateTranslationOverhead(size_t text_length, RandomStream& rng,
                                     const TranslationCostModel& model = {});

}  // namespace avec

#endif  // AVEC_TRANSFORM_H_
