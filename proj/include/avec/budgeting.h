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

#ifndef AVEC_BUDGETING_H_
#define AVEC_BUDGETING_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "avec/random.h"

namespace avec {

enum class PrivacyPreference { kHigh, kMedium };

std::string_view PreferenceName(PrivacyPreference p);

// Constants of the local agent's budgeting heuristics.
struct BudgetingConstants {
  double epsilon_base_high = 0.05;
  double epsilon_base_medium = 0.10;
  double confidence_threshold = 0.8;
  double kappa = 5.0;
  double delta_f = 0.3;
  double epsilon_eta = 0.01;

  // Sensitivity = clamp(domain weight + entity_weight * entity count, 0, 1).
  std::map<std::string, double, std::less<>> domain_weights = {
      {"medical", 0.6}, {"financial", 0.6}, {"legal", 0.6},
      {"creative", 0.2}};
  double default_domain_weight = 0.4;
  double entity_weight = 0.15;

  // Confidence = cache_hit ? cache_hit_confidence
  //   : clamp(intercept - slope*S - entity_penalty*[m>0], 0, 1), then
  //   + U(-jitter, +jitter), clamped again.
  double cache_hit_confidence = 0.95;
  double confidence_intercept = 0.9;
  double confidence_sensitivity_slope = 0.5;
  double confidence_entity_penalty = 0.1;
  double confidence_jitter = 0.05;
};

struct UserConfig {
  PrivacyPreference privacy_preference = PrivacyPreference::kMedium;
  double epsilon_base = 0.10;
  double epsilon_max = 1.5;
  double confidence_threshold = 0.8;
  double kappa = 5.0;
  double delta_f = 0.3;
  double epsilon_eta = 0.01;

  static UserConfig For(PrivacyPreference preference, double epsilon_max,
                        const BudgetingConstants& constants);

  absl::Status Validate() const;
  // b = delta_f / epsilon_eta.
  double LaplaceScale() const { return delta_f / epsilon_eta; }
};

struct QueryFeatures {
  std::string_view domain;
  size_t entity_count = 0;
  bool cache_hit = false;
};

struct BudgetProposal {
  double sensitivity = 0.0;
  double local_confidence = 0.0;
  double f_seq = 1.0;
  double eta_sample = 0.0;
  double delta_eps_raw = 0.0;
  double effective_eps = 0.0;
};

enum class Route { kLocal, kDelegate };

double SensitivityScore(const QueryFeatures& query,
                        const BudgetingConstants& constants);

// Consumes exactly one uniform from `rng`, cache hit or not.
double LocalConfidence(const QueryFeatures& query, double sensitivity,
                       const BudgetingConstants& constants, RandomStream& rng);

// exp(-n / kappa).
absl::StatusOr<double> SequenceDecay(int n, double kappa);

// Inverse CDF of Laplace(0, b) at u in (0, 1).
double LaplaceInverseCdf(double u, double scale);
// One uniform per sample.
absl::StatusOr<double> SampleLaplace(double scale, RandomStream& rng);

// Δε = (ε_base · S · (1 − C)) · F_seq + η, effective = min(max(Δε, 0),
// remaining). The noise is passed in so the formula can be checked exactly.
BudgetProposal ProposeBudgetWithNoise(const UserConfig& user,
                                      int queries_issued, double sensitivity,
                                      double confidence, double eta,
                                      double remaining_budget);
// Draws η ~ Laplace(0, user.LaplaceScale()) from `rng` (one uniform).
BudgetProposal ProposeBudget(const UserConfig& user, int queries_issued,
                             double sensitivity, double confidence,
                             double remaining_budget, RandomStream& rng);

// Local iff confidence >= threshold.
Route RouteQuery(double confidence, double threshold);

}  // namespace avec

#endif  // AVEC_BUDGETING_H_
