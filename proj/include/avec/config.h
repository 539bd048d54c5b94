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

#ifndef AVEC_CONFIG_H_
#define AVEC_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "avec/accounting.h"
#include "avec/budgeting.h"
#include "avec/entities.h"
#include "avec/remote.h"
#include "avec/transform.h"
#include "json.hpp"

namespace avec {

struct GatingConfig {
  // +inf turns gate randomization off ("off" in the file).
  double epsilon_gate = 0.5;
};

struct TransformConfig {
  std::vector<EntityPattern> patterns = DefaultEntityPatterns();
  uint32_t vocab_min = 8;
  uint32_t vocab_max = 64;
  LevelThresholds thresholds;
  TranslationCostModel translation;
  // Probability that the translation agent corrupts a proof digest.
  double tamper_rate = 0.0;
};

struct AccountingConfig {
  double delta_star = 1e-5;
  double delta_ent = 0.0;
  std::vector<double> alpha_grid = DefaultAlphaGrid();
};

struct SimConfig {
  int n_users = 100;
  int n_queries_per_user = 10;
  int n_trials = 30;
  uint64_t master_seed = 1729;
  double epsilon_max_min = 1.0;
  double epsilon_max_max = 2.0;
  int threads = 1;
  // Simulation clock origin for proof timestamps (2024-01-01T00:00:00Z).
  int64_t base_epoch = 1704067200;
};

struct StatsConfig {
  int bootstrap_resamples = 1000;
  double ci_level = 0.95;
};

struct Config {
  BudgetingConstants budgeting;
  GatingConfig gating;
  TransformConfig transform;
  RemoteCostModel remote;
  LocalCostModel local;
  AccountingConfig accounting;
  SimConfig sim;
  StatsConfig stats;

  absl::Status Validate() const;
};

inline constexpr int kConfigSchemaVersion = 1;

nlohmann::ordered_json ConfigToJson(const Config& config);
// Keys present in `json` override `base`; unknown keys are errors.
absl::StatusOr<Config> ConfigFromJson(const nlohmann::json& json,
                                      Config base = {});
absl::StatusOr<Config> ParseConfig(std::string_view text, Config base = {});
absl::StatusOr<Config> LoadConfigFile(const std::string& path,
                                      Config base = {});

}  // namespace avec

#endif  // AVEC_CONFIG_H_
