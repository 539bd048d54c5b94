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

#ifndef AVEC_SIM_H_
#define AVEC_SIM_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "avec/accounting.h"
#include "avec/config.h"
#include "avec/entities.h"
#include "avec/remote.h"

namespace avec {

enum class Policy {
  kAvecHigh,
  kAvecMedium,
  kAlwaysDelegate,
  kFixedEps01,
  kFixedEps1,
  kFixedEps5,
  kAlwaysLocal,
};

// "avec-high", "avec-medium", "always-delegate", "fixed-eps-0.1",
// "fixed-eps-1.0", "fixed-eps-5.0", "always-local".
std::string_view PolicyName(Policy policy);
absl::StatusOr<Policy> ParsePolicy(std::string_view name);
const std::vector<Policy>& AllPolicies();
std::optional<double> FixedEpsilon(Policy policy);
bool IsAvecPolicy(Policy policy);
// Whether the policy's odometer enforces the user's epsilon_max.
bool PolicyIsCapped(Policy policy);

struct PoolQuery {
  std::string id;
  std::string domain;
  std::string text;
  int expected_entities = 0;
  // Answerable from the on-device cache of common facts.
  bool cached = false;
};

class QueryPool {
 public:
  static absl::StatusOr<QueryPool> FromJson(std::string_view text);
  // The versioned pool compiled into the binary.
  static const QueryPool& Default();

  const std::string& version() const { return version_; }
  const std::vector<PoolQuery>& queries() const { return queries_; }
  size_t size() const { return queries_.size(); }

 private:
  std::string version_;
  std::vector<PoolQuery> queries_;
};

// Raw text of the shipped pool file.
std::string_view DefaultQueryPoolJson();

struct QueryEvent {
  int trial_id = 0;
  int user_id = 0;
  std::string query_id;
  std::string domain;
  bool delegated = false;
  bool released_bit = false;
  // Entity budget committed to the query's translation.
  double epsilon_spent = 0.0;
  // Charge of the released gate bit; +inf when randomization is off.
  double epsilon_gate = 0.0;
  // Odometer pure-ε total after this query (gate, noisy proposal and
  // entity charges so far).
  double epsilon_cumulative = 0.0;
  double cost = 0.0;
  double latency_ms = 0.0;
  QualityLabel quality_label = QualityLabel::kLocalHighConfidence;
  std::string verification;
  int entity_count = 0;
  uint32_t k_effective = 0;
  // Cap in force; +inf for uncapped baselines.
  double epsilon_max = 0.0;
  double remaining_budget = 0.0;
  std::string proof_digest;
};

// Fixed CSV column order.
const std::vector<std::string>& QueryEventColumns();
std::string QueryEventCsvHeader();
std::string QueryEventCsvRow(const QueryEvent& event);

struct UserLedger {
  int user_id = 0;
  double epsilon_max = 0.0;
  bool capped = true;
  double pure_total = 0.0;
  size_t entries = 0;
  std::vector<double> rdp_totals;
  DpGuarantee dp;
  DpGuarantee session;
};

struct TrialAggregates {
  int trial_id = 0;
  size_t events = 0;
  size_t delegated = 0;
  double delegation_rate = 0.0;
  double mean_cost = 0.0;
  // 0 when nothing was delegated.
  double mean_delegated_cost = 0.0;
  double mean_latency_ms = 0.0;
  // Mean over users of the final cumulative odometer charge.
  double mean_epsilon_spent = 0.0;
  size_t proofs = 0;
  size_t verified = 0;
  // verified / proofs, 1 when no proof was issued.
  double verification_rate = 1.0;
  size_t budget_violations = 0;
};

struct TrialResult {
  int trial_id = 0;
  std::vector<QueryEvent> events;
  std::vector<UserLedger> ledgers;
  TrialAggregates aggregates;
};

struct ScenarioResult {
  Policy policy = Policy::kAvecHigh;
  std::vector<TrialResult> trials;
};

// Recomputes the per-trial event aggregates from a flat event list; used on
// logs read back from disk. Odometer-derived fields stay at their defaults.
std::vector<TrialAggregates> AggregateEvents(
    const std::vector<QueryEvent>& events);

// Number of (trial, user) streams where the cumulative charge or the sum of
// committed entity budgets exceeds epsilon_max.
size_t CountBudgetViolations(const std::vector<QueryEvent>& events);

class Simulator {
 public:
  static absl::StatusOr<Simulator> Create(Config config,
                                          const QueryPool& pool);

  const Config& config() const { return config_; }
  const VocabularySet& vocabularies() const { return vocab_; }
  const std::vector<std::vector<Entity>>& pool_entities() const {
    return entities_;
  }

  absl::StatusOr<TrialResult> RunTrial(Policy policy, int trial_id) const;
  // Trials 0..n_trials-1; config().sim.threads workers over (trial, user).
  absl::StatusOr<ScenarioResult> RunScenario(Policy policy,
                                             int n_trials) const;

 private:
  Simulator() = default;

  struct UserRun {
    std::vector<QueryEvent> events;
    UserLedger ledger;
  };
  absl::StatusOr<UserRun> RunUser(Policy policy, int trial_id,
                                  int user_id) const;
  static TrialResult Assemble(int trial_id, std::vector<UserRun> users);

  Config config_;
  std::vector<PoolQuery> queries_;
  std::vector<std::vector<Entity>> entities_;
  VocabularySet vocab_;
  EntityDetector detector_;
};

// Reads a CSV written by QueryEventCsvRow (with header).
absl::StatusOr<std::vector<QueryEvent>> ParseQueryEventCsv(
    std::string_view text);

}  // namespace avec

#endif  // AVEC_SIM_H_
