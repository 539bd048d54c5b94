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

#ifndef AVEC_REPORT_H_
#define AVEC_REPORT_H_

#include <string>
#include <vector>

#include "avec/config.h"
#include "avec/sim.h"
#include "avec/stats.h"
#include "json.hpp"

namespace avec {

inline constexpr int kReportSchemaVersion = 1;

struct ScenarioSummary {
  Policy policy = Policy::kAvecHigh;
  std::vector<TrialAggregates> trials;
};

ScenarioSummary Summarize(const ScenarioResult& result);

struct StatsEntry {
  std::string family;
  std::string test;
  std::string metric;
  std::vector<std::string> scenarios;
  stats::TestResult result;
  double p_adjusted = 1.0;
  // Set when the test could not be run on this data.
  std::string error;
};

struct IntervalEntry {
  std::string scenario;
  std::string metric;
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct StatsBattery {
  std::vector<StatsEntry> tests;
  std::vector<IntervalEntry> intervals;

  const StatsEntry* Find(std::string_view test, std::string_view metric,
                         std::string_view other_scenario = "") const;
};

// Omnibus family: ANOVA and Kruskal-Wallis on per-trial mean cost across all
// scenarios. Pairwise family: avec-high (or the first scenario) against each
// other scenario with Welch t, Mann-Whitney and Wilcoxon on per-trial mean
// cost plus a chi-squared test on pooled delegation counts. p-values are
// Bonferroni-adjusted within each family. Percentile bootstrap intervals for
// the mean cost and delegation rate of every scenario.
StatsBattery RunStatsBattery(const std::vector<ScenarioSummary>& scenarios,
                             const Config& config);

nlohmann::ordered_json AggregatesJson(const TrialAggregates& a);
nlohmann::ordered_json BatteryJson(const StatsBattery& battery);
nlohmann::ordered_json LedgerJson(const UserLedger& ledger,
                                  const std::vector<double>& alpha_grid);

// Full run report: config echo, pool version, per-scenario aggregates and
// odometer dumps, stats battery.
nlohmann::ordered_json RunReportJson(const Config& config,
                                     const std::string& pool_version,
                                     const std::vector<ScenarioResult>& runs,
                                     const StatsBattery& battery);

// Report over logs only (no odometer dumps).
nlohmann::ordered_json SummaryJson(const std::vector<ScenarioSummary>& scenarios,
                                   const StatsBattery& battery);

std::string AggregatesCsv(const std::vector<ScenarioSummary>& scenarios);
std::string TestsCsv(const StatsBattery& battery);

}  // namespace avec

#endif  // AVEC_REPORT_H_
