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

#include "avec/budgeting.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace avec {
namespace {

double Clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

std::string_view PreferenceName(PrivacyPreference p) {
  return p == PrivacyPreference::kHigh ? "high" : "medium";
}

UserConfig UserConfig::For(PrivacyPreference preference, double epsilon_max,
                           const BudgetingConstants& constants) {
  UserConfig user;
  user.privacy_preference = preference;
  user.epsilon_base = preference == PrivacyPreference::kHigh
                          ? constants.epsilon_base_high
                          : constants.epsilon_base_medium;
  user.epsilon_max = epsilon_max;
  user.confidence_threshold = constants.confidence_threshold;
  user.kappa = constants.kappa;
  user.delta_f = constants.delta_f;
  user.epsilon_eta = constants.epsilon_eta;
  return user;
}

absl::Status UserConfig::Validate() const {
  if (!(epsilon_base > 0.0)) {
    return absl::InvalidArgumentError("epsilon_base must be > 0");
  }
  if (!(epsilon_max > 0.0)) {
    return absl::InvalidArgumentError("epsilon_max must be > 0");
  }
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0)) {
    return absl::InvalidArgumentError("confidence_threshold must be in [0,1]");
  }
  if (!(kappa > 0.0)) return absl::InvalidArgumentError("kappa must be > 0");
  const double b = LaplaceScale();
  if (!(delta_f > 0.0) || !(epsilon_eta > 0.0) || !std::isfinite(b) ||
      !(b > 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Laplace scale delta_f/epsilon_eta must be finite and > 0, got ", b));
  }
  return absl::OkStatus();
}

double SensitivityScore(const QueryFeatures& query,
                        const BudgetingConstants& constants) {
  double weight = constants.default_domain_weight;
  if (auto it = constants.domain_weights.find(query.domain);
      it != constants.domain_weights.end()) {
    weight = it->second;
  }
  return Clamp01(weight +
                 constants.entity_weight *
                     static_cast<double>(query.entity_count));
}

double LocalConfidence(const QueryFeatures& query, double sensitivity,
                       const BudgetingConstants& constants,
                       RandomStream& rng) {
  const double jitter = rng.Uniform(-constants.confidence_jitter,
                                    constants.confidence_jitter);
  if (query.cache_hit) return constants.cache_hit_confidence;
  const double base =
      Clamp01(constants.confidence_intercept -
              constants.confidence_sensitivity_slope * sensitivity -
              (query.entity_count > 0 ? constants.confidence_entity_penalty
                                      : 0.0));
  return Clamp01(base + jitter);
}

absl::StatusOr<double> SequenceDecay(int n, double kappa) {
  if (!(kappa > 0.0)) {
    return absl::InvalidArgumentError("kappa must be > 0");
  }
  if (n < 0) return absl::InvalidArgumentError("query index must be >= 0");
  return std::exp(-static_cast<double>(n) / kappa);
}

double LaplaceInverseCdf(double u, double scale) {
  return u < 0.5 ? scale * std::log(2.0 * u)
                 : -scale * std::log(2.0 * (1.0 - u));
}

absl::StatusOr<double> SampleLaplace(double scale, RandomStream& rng) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    return absl::InvalidArgumentError("Laplace scale must be finite and > 0");
  }
  return LaplaceInverseCdf(rng.Uniform(), scale);
}

BudgetProposal ProposeBudgetWithNoise(const UserConfig& user,
                                      int queries_issued, double sensitivity,
                                      double confidence, double eta,
                                      double remaining_budget) {
  BudgetProposal p;
  p.sensitivity = sensitivity;
  p.local_confidence = confidence;
  p.f_seq = std::exp(-static_cast<double>(queries_issued) / user.kappa);
  p.eta_sample = eta;
  p.delta_eps_raw =
      (user.epsilon_base * sensitivity * (1.0 - confidence)) * p.f_seq + eta;
  p.effective_eps =
      std::min(std::max(p.delta_eps_raw, 0.0), std::max(remaining_budget, 0.0));
  return p;
}

BudgetProposal ProposeBudget(const UserConfig& user, int queries_issued,
                             double sensitivity, double confidence,
                             double remaining_budget, RandomStream& rng) {
  const double eta = LaplaceInverseCdf(rng.Uniform(), user.LaplaceScale());
  return ProposeBudgetWithNoise(user, queries_issued, sensitivity, confidence,
                                eta, remaining_budget);
}

Route RouteQuery(double confidence, double threshold) {
  return confidence >= threshold ? Route::kLocal : Route::kDelegate;
}

}  // namespace avec
