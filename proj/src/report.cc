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

#include "avec/report.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "avec/strings.h"

namespace avec {
namespace {

using nlohmann::ordered_json;

std::vector<double> Metric(const ScenarioSummary& s,
                           double TrialAggregates::*field) {
  std::vector<double> out;
  for (const TrialAggregates& t : s.trials) out.push_back(t.*field);
  return out;
}

ordered_json Number(double v) {
  if (std::isfinite(v)) return v;
  return FormatDouble(v);
}

void AddEntry(StatsBattery& battery, std::string family, std::string test,
              std::string metric, std::vector<std::string> scenarios,
              const absl::StatusOr<stats::TestResult>& result) {
  StatsEntry e;
  e.family = std::move(family);
  e.test = std::move(test);
  e.metric = std::move(metric);
  e.scenarios = std::move(scenarios);
  if (result.ok()) {
    e.result = *result;
  } else {
    e.error = std::string(result.status().message());
  }
  battery.tests.push_back(std::move(e));
}

void AdjustFamily(StatsBattery& battery, std::string_view family) {
  std::vector<StatsEntry*> members;
  for (StatsEntry& e : battery.tests) {
    if (e.family == family && e.error.empty()) members.push_back(&e);
  }
  if (members.empty()) return;
  std::vector<double> p;
  for (const StatsEntry* e : members) p.push_back(e->result.p_value);
  absl::StatusOr<std::vector<double>> adjusted =
      stats::Bonferroni(p, static_cast<int>(members.size()));
  for (size_t i = 0; i < members.size(); ++i) {
    members[i]->p_adjusted = adjusted.ok() ? (*adjusted)[i] : 1.0;
  }
}

}  // namespace

ScenarioSummary Summarize(const ScenarioResult& result) {
  ScenarioSummary s;
  s.policy = result.policy;
  for (const TrialResult& t : result.trials) s.trials.push_back(t.aggregates);
  return s;
}

const StatsEntry* StatsBattery::Find(std::string_view test,
                                     std::string_view metric,
                                     std::string_view other_scenario) const {
  for (const StatsEntry& e : tests) {
    if (e.test != test || e.metric != metric) continue;
    if (other_scenario.empty() ||
        std::find(e.scenarios.begin(), e.scenarios.end(), other_scenario) !=
            e.scenarios.end()) {
      return &e;
    }
  }
  return nullptr;
}

StatsBattery RunStatsBattery(const std::vector<ScenarioSummary>& scenarios,
                             const Config& config) {
  StatsBattery battery;
  if (scenarios.empty()) return battery;

  if (scenarios.size() >= 2) {
    std::vector<std::vector<double>> groups;
    std::vector<std::string> names;
    for (const ScenarioSummary& s : scenarios) {
      groups.push_back(Metric(s, &TrialAggregates::mean_cost));
      names.emplace_back(PolicyName(s.policy));
    }
    AddEntry(battery, "omnibus", "anova_f", "mean_cost", names,
             stats::AnovaF(groups));
    AddEntry(battery, "omnibus", "kruskal_wallis", "mean_cost", names,
             stats::KruskalWallis(groups));
    AdjustFamily(battery, "omnibus");

    size_t ref = 0;
    for (size_t i = 0; i < scenarios.size(); ++i) {
      if (scenarios[i].policy == Policy::kAvecHigh) ref = i;
    }
    const ScenarioSummary& base = scenarios[ref];
    const std::string base_name(PolicyName(base.policy));
    const std::vector<double> base_cost =
        Metric(base, &TrialAggregates::mean_cost);
    for (size_t i = 0; i < scenarios.size(); ++i) {
      if (i == ref) continue;
      const ScenarioSummary& other = scenarios[i];
      const std::vector<std::string> pair = {base_name,
                                             std::string(PolicyName(other.policy))};
      const std::vector<double> other_cost =
          Metric(other, &TrialAggregates::mean_cost);
      AddEntry(battery, "pairwise", "welch_t", "mean_cost", pair,
               stats::WelchTTest(base_cost, other_cost));
      AddEntry(battery, "pairwise", "mann_whitney", "mean_cost", pair,
               stats::MannWhitney(base_cost, other_cost));

      // Pair trials by id: both scenarios share per-trial seeds.
      std::map<int, double> other_by_trial;
      for (const TrialAggregates& t : other.trials) {
        other_by_trial[t.trial_id] = t.mean_cost;
      }
      std::vector<double> paired_a, paired_b;
      for (const TrialAggregates& t : base.trials) {
        if (auto it = other_by_trial.find(t.trial_id);
            it != other_by_trial.end()) {
          paired_a.push_back(t.mean_cost);
          paired_b.push_back(it->second);
        }
      }
      AddEntry(battery, "pairwise", "wilcoxon_signed_rank", "mean_cost", pair,
               stats::WilcoxonSignedRank(paired_a, paired_b));

      stats::Table table(2, std::vector<double>(2, 0.0));
      for (const TrialAggregates& t : base.trials) {
        table[0][0] += static_cast<double>(t.delegated);
        table[0][1] += static_cast<double>(t.events - t.delegated);
      }
      for (const TrialAggregates& t : other.trials) {
        table[1][0] += static_cast<double>(t.delegated);
        table[1][1] += static_cast<double>(t.events - t.delegated);
      }
      AddEntry(battery, "pairwise", "chi_squared", "delegation_counts", pair,
               stats::ChiSquared(table));
    }
    AdjustFamily(battery, "pairwise");
  }

  for (size_t i = 0; i < scenarios.size(); ++i) {
    const ScenarioSummary& s = scenarios[i];
    const std::pair<const char*, double TrialAggregates::*> metrics[] = {
        {"mean_cost", &TrialAggregates::mean_cost},
        {"delegation_rate", &TrialAggregates::delegation_rate},
    };
    for (size_t m = 0; m < std::size(metrics); ++m) {
      const std::vector<double> values = Metric(s, metrics[m].second);
      RandomStream rng(config.sim.master_seed,
                       static_cast<uint32_t>(i * std::size(metrics) + m),
                       static_cast<uint32_t>(StreamTag::kBootstrap));
      absl::StatusOr<std::pair<double, double>> ci = stats::BootstrapCi(
          values, [](stats::Sample x) { return stats::Mean(x); },
          config.stats.bootstrap_resamples, config.stats.ci_level, rng);
      if (!ci.ok()) continue;
      battery.intervals.push_back({std::string(PolicyName(s.policy)),
                                   metrics[m].first, stats::Mean(values),
                                   ci->first, ci->second});
    }
  }
  return battery;
}

ordered_json AggregatesJson(const TrialAggregates& a) {
  return {
      {"trial_id", a.trial_id},
      {"events", a.events},
      {"delegated", a.delegated},
      {"delegation_rate", a.delegation_rate},
      {"mean_cost", a.mean_cost},
      {"mean_delegated_cost", a.mean_delegated_cost},
      {"mean_latency_ms", a.mean_latency_ms},
      {"mean_epsilon_spent", a.mean_epsilon_spent},
      {"proofs", a.proofs},
      {"verified", a.verified},
      {"verification_rate", a.verification_rate},
      {"budget_violations", a.budget_violations},
  };
}

ordered_json BatteryJson(const StatsBattery& battery) {
  ordered_json tests = ordered_json::array();
  for (const StatsEntry& e : battery.tests) {
    ordered_json t = {
        {"family", e.family},
        {"test", e.test},
        {"metric", e.metric},
        {"scenarios", e.scenarios},
    };
    if (!e.error.empty()) {
      t["error"] = e.error;
    } else {
      t["statistic"] = Number(e.result.statistic);
      t["df"] = e.result.df;
      t["p_value"] = e.result.p_value;
      t["p_adjusted"] = e.p_adjusted;
      if (e.result.effect_size) t["effect_size"] = Number(*e.result.effect_size);
    }
    tests.push_back(t);
  }
  ordered_json intervals = ordered_json::array();
  for (const IntervalEntry& i : battery.intervals) {
    intervals.push_back({{"scenario", i.scenario},
                         {"metric", i.metric},
                         {"mean", i.mean},
                         {"lo", i.lo},
                         {"hi", i.hi}});
  }
  return {{"tests", tests}, {"bootstrap_intervals", intervals}};
}

ordered_json LedgerJson(const UserLedger& l,
                        const std::vector<double>& alpha_grid) {
  ordered_json curve = ordered_json::array();
  for (size_t i = 0; i < alpha_grid.size() && i < l.rdp_totals.size(); ++i) {
    curve.push_back({alpha_grid[i], l.rdp_totals[i]});
  }
  return {
      {"user_id", l.user_id},
      {"epsilon_max", l.epsilon_max},
      {"capped", l.capped},
      {"pure_total", l.pure_total},
      {"entries", l.entries},
      {"rdp", curve},
      {"dp", {{"epsilon", l.dp.epsilon},
              {"delta", l.dp.delta},
              {"alpha", l.dp.alpha_star}}},
      {"session", {{"epsilon", l.session.epsilon},
                   {"delta", l.session.delta},
                   {"alpha", l.session.alpha_star}}},
  };
}

ordered_json RunReportJson(const Config& config,
                           const std::string& pool_version,
                           const std::vector<ScenarioResult>& runs,
                           const StatsBattery& battery) {
  ordered_json scenarios = ordered_json::array();
  for (const ScenarioResult& run : runs) {
    ordered_json trials = ordered_json::array();
    for (const TrialResult& t : run.trials) {
      ordered_json ledgers = ordered_json::array();
      for (const UserLedger& l : t.ledgers) {
        ledgers.push_back(LedgerJson(l, config.accounting.alpha_grid));
      }
      ordered_json entry = AggregatesJson(t.aggregates);
      entry["odometers"] = ledgers;
      trials.push_back(entry);
    }
    scenarios.push_back({{"scenario", PolicyName(run.policy)},
                         {"capped", PolicyIsCapped(run.policy)},
                         {"gate_witnessed_epsilon",
                          IsAvecPolicy(run.policy) ? ordered_json(nullptr)
                                                   : ordered_json(0.0)},
                         {"trials", trials}});
  }
  return {
      {"schema_version", kReportSchemaVersion},
      {"pool_version", pool_version},
      {"config", ConfigToJson(config)},
      {"scenarios", scenarios},
      {"stats", BatteryJson(battery)},
  };
}

ordered_json SummaryJson(const std::vector<ScenarioSummary>& scenarios,
                         const StatsBattery& battery) {
  ordered_json list = ordered_json::array();
  for (const ScenarioSummary& s : scenarios) {
    ordered_json trials = ordered_json::array();
    for (const TrialAggregates& t : s.trials) trials.push_back(AggregatesJson(t));
    list.push_back({{"scenario", PolicyName(s.policy)}, {"trials", trials}});
  }
  return {
      {"schema_version", kReportSchemaVersion},
      {"scenarios", list},
      {"stats", BatteryJson(battery)},
  };
}

std::string AggregatesCsv(const std::vector<ScenarioSummary>& scenarios) {
  std::string out =
      "scenario,trial_id,events,delegated,delegation_rate,mean_cost,"
      "mean_delegated_cost,mean_latency_ms,mean_epsilon_spent,proofs,"
      "verified,verification_rate,budget_violations\n";
  for (const ScenarioSummary& s : scenarios) {
    for (const TrialAggregates& a : s.trials) {
      absl::StrAppend(&out, std::string(PolicyName(s.policy)), ",",
                      a.trial_id, ",", a.events, ",", a.delegated, ",",
                      FormatDouble(a.delegation_rate), ",",
                      FormatDouble(a.mean_cost), ",",
                      FormatDouble(a.mean_delegated_cost), ",",
                      FormatDouble(a.mean_latency_ms), ",",
                      FormatDouble(a.mean_epsilon_spent), ",", a.proofs, ",",
                      a.verified, ",", FormatDouble(a.verification_rate), ",",
                      a.budget_violations, "\n");
    }
  }
  return out;
}

std::string TestsCsv(const StatsBattery& battery) {
  std::string out =
      "family,test,metric,scenarios,statistic,df,p_value,p_adjusted,"
      "effect_size,error\n";
  for (const StatsEntry& e : battery.tests) {
    const bool ok = e.error.empty();
    absl::StrAppend(
        &out, e.family, ",", e.test, ",", e.metric, ",",
        absl::StrJoin(e.scenarios, ";"), ",",
        ok ? FormatDouble(e.result.statistic) : "", ",",
        ok ? FormatDouble(e.result.df) : "", ",",
        ok ? FormatDouble(e.result.p_value) : "", ",",
        ok ? FormatDouble(e.p_adjusted) : "", ",",
        ok && e.result.effect_size ? FormatDouble(*e.result.effect_size) : "",
        ",", e.error, "\n");
  }
  return out;
}

}  // namespace avec
