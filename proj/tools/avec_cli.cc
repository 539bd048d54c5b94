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

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "avec/config.h"
#include "avec/entities.h"
#include "avec/gating.h"
#include "avec/kernels.h"
#include "avec/report.h"
#include "avec/sim.h"
#include "avec/strings.h"
#include "avec/transform.h"
#include "avec/verification.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnwritable = 3;

struct Options {
  std::string config_path;
  std::optional<int> threads;
  bool print_config = false;

  std::string scenario;
  std::optional<int> trials;
  std::optional<uint64_t> seed;
  std::optional<int> users;
  std::optional<int> queries_per_user;
  std::optional<std::string> epsilon_gate;
  std::optional<double> tamper_rate;
  std::string out_dir = "avec_out";

  std::string in_dir;
  std::string report_out;

  std::string demo = "all";
  uint64_t demo_samples = 200'000;
  double demo_epsilon = 1.0;

  std::vector<double> attack_eps;
  std::vector<uint32_t> attack_k;
  uint64_t attack_samples = 1'000'000;
};

void Err(const std::string& message) { std::cerr << "avec: " << message << "\n"; }

std::optional<avec::Config> BuildConfig(const Options& o) {
  avec::Config config;
  if (!o.config_path.empty()) {
    absl::StatusOr<avec::Config> loaded = avec::LoadConfigFile(o.config_path);
    if (!loaded.ok()) {
      Err(std::string(loaded.status().message()));
      return std::nullopt;
    }
    config = *loaded;
  }
  if (o.threads) config.sim.threads = *o.threads;
  if (o.trials) config.sim.n_trials = *o.trials;
  if (o.seed) config.sim.master_seed = *o.seed;
  if (o.users) config.sim.n_users = *o.users;
  if (o.queries_per_user) config.sim.n_queries_per_user = *o.queries_per_user;
  if (o.tamper_rate) config.transform.tamper_rate = *o.tamper_rate;
  if (o.epsilon_gate) {
    if (*o.epsilon_gate == "off") {
      config.gating.epsilon_gate = std::numeric_limits<double>::infinity();
    } else {
      try {
        config.gating.epsilon_gate = std::stod(*o.epsilon_gate);
      } catch (const std::exception&) {
        Err("--epsilon-gate must be a number or 'off'");
        return std::nullopt;
      }
    }
  }
  if (absl::Status s = config.Validate(); !s.ok()) {
    Err(std::string(s.message()));
    return std::nullopt;
  }
  return config;
}

// Creates `dir` and checks that a file can be written into it.
bool EnsureWritableDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) return false;
  const fs::path probe = dir / ".avec_write_probe";
  {
    std::ofstream out(probe);
    if (!out) return false;
  }
  fs::remove(probe, ec);
  return true;
}

bool WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return static_cast<bool>(out);
}

int CmdRun(const Options& o) {
  std::optional<avec::Config> config = BuildConfig(o);
  if (!config) return kExitUsage;

  std::vector<avec::Policy> policies;
  if (o.scenario == "all") {
    policies = avec::AllPolicies();
  } else {
    absl::StatusOr<avec::Policy> p = avec::ParsePolicy(o.scenario);
    if (!p.ok()) {
      Err(std::string(p.status().message()));
      return kExitUsage;
    }
    policies.push_back(*p);
  }
  const fs::path out_dir(o.out_dir);
  if (!EnsureWritableDir(out_dir)) {
    Err("cannot write to " + out_dir.string());
    return kExitUnwritable;
  }

  const avec::QueryPool& pool = avec::QueryPool::Default();
  absl::StatusOr<avec::Simulator> sim = avec::Simulator::Create(*config, pool);
  if (!sim.ok()) {
    Err(std::string(sim.status().message()));
    return kExitUsage;
  }

  std::vector<avec::ScenarioResult> runs;
  std::vector<avec::ScenarioSummary> summaries;
  for (avec::Policy policy : policies) {
    absl::StatusOr<avec::ScenarioResult> run =
        sim->RunScenario(policy, config->sim.n_trials);
    if (!run.ok()) {
      Err(std::string(run.status().message()));
      return kExitFailure;
    }
    std::string csv = avec::QueryEventCsvHeader() + "\n";
    size_t n_events = 0;
    for (const avec::TrialResult& t : run->trials) {
      for (const avec::QueryEvent& e : t.events) {
        csv += avec::QueryEventCsvRow(e);
        csv += '\n';
        ++n_events;
      }
    }
    const fs::path csv_path =
        out_dir / ("events_" + std::string(avec::PolicyName(policy)) + ".csv");
    if (!WriteFile(csv_path, csv)) {
      Err("cannot write " + csv_path.string());
      return kExitUnwritable;
    }
    std::cout << absl::StrFormat("%-16s %zu events -> %s\n",
                                 std::string(avec::PolicyName(policy)), n_events,
                                 csv_path.string());
    summaries.push_back(avec::Summarize(*run));
    runs.push_back(*std::move(run));
  }

  const avec::StatsBattery battery = avec::RunStatsBattery(summaries, *config);
  const fs::path report_path = out_dir / "report.json";
  if (!WriteFile(report_path,
                 avec::RunReportJson(*config, pool.version(), runs, battery)
                         .dump(2) +
                     "\n")) {
    Err("cannot write " + report_path.string());
    return kExitUnwritable;
  }
  std::cout << "report -> " << report_path.string() << "\n";
  return kExitOk;
}

int CmdReport(const Options& o) {
  const fs::path in_dir(o.in_dir);
  if (!fs::is_directory(in_dir)) {
    Err("input directory " + in_dir.string() + " does not exist");
    return kExitUsage;
  }
  std::optional<avec::Config> config = BuildConfig(o);
  if (!config) return kExitUsage;

  std::vector<avec::ScenarioSummary> summaries;
  for (avec::Policy policy : avec::AllPolicies()) {
    const fs::path csv_path =
        in_dir / ("events_" + std::string(avec::PolicyName(policy)) + ".csv");
    if (!fs::exists(csv_path)) continue;
    std::ifstream in(csv_path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    absl::StatusOr<std::vector<avec::QueryEvent>> events =
        avec::ParseQueryEventCsv(buffer.str());
    if (!events.ok()) {
      Err(csv_path.string() + ": " + std::string(events.status().message()));
      return kExitUsage;
    }
    summaries.push_back({policy, avec::AggregateEvents(*events)});
  }
  if (summaries.empty()) {
    Err("no events_<scenario>.csv files in " + in_dir.string());
    return kExitUsage;
  }

  const fs::path out_dir(o.report_out.empty() ? o.in_dir : o.report_out);
  if (!EnsureWritableDir(out_dir)) {
    Err("cannot write to " + out_dir.string());
    return kExitUnwritable;
  }
  const avec::StatsBattery battery = avec::RunStatsBattery(summaries, *config);
  if (!WriteFile(out_dir / "summary.json",
                 avec::SummaryJson(summaries, battery).dump(2) + "\n") ||
      !WriteFile(out_dir / "aggregates.csv", avec::AggregatesCsv(summaries)) ||
      !WriteFile(out_dir / "tests.csv", avec::TestsCsv(battery))) {
    Err("cannot write report files to " + out_dir.string());
    return kExitUnwritable;
  }

  std::cout << absl::StrFormat("%-16s %7s %10s %10s %12s %8s\n", "scenario",
                               "trials", "deleg.rate", "mean.cost",
                               "latency.ms", "verif.");
  for (const avec::ScenarioSummary& s : summaries) {
    double rate = 0, cost = 0, latency = 0, verif = 0;
    for (const avec::TrialAggregates& t : s.trials) {
      rate += t.delegation_rate;
      cost += t.mean_cost;
      latency += t.mean_latency_ms;
      verif += t.verification_rate;
    }
    const double n = static_cast<double>(s.trials.size());
    std::cout << absl::StrFormat("%-16s %7zu %10.4f %10.6f %12.2f %8.4f\n",
                                 std::string(avec::PolicyName(s.policy)), s.trials.size(),
                                 rate / n, cost / n, latency / n, verif / n);
  }
  std::cout << "\n";
  for (const avec::StatsEntry& e : battery.tests) {
    if (!e.error.empty()) {
      std::cout << absl::StrFormat("%-9s %-21s %-18s %s: %s\n", e.family,
                                   e.test, e.metric,
                                   absl::StrJoin(e.scenarios, " vs "), e.error);
      continue;
    }
    std::cout << absl::StrFormat(
        "%-9s %-21s %-18s stat=%-12.6g p=%-11.4g p_adj=%-11.4g %s\n", e.family,
        e.test, e.metric, e.result.statistic, e.result.p_value, e.p_adjusted,
        e.scenarios.size() == 2 ? absl::StrJoin(e.scenarios, " vs ")
                                : std::string("all"));
  }
  std::cout << "report -> " << out_dir.string() << "\n";
  return kExitOk;
}

void PrintAgent(const avec::AgentReport& a, double epsilon) {
  std::cout << absl::StrFormat(
      "  %-10s proof=%-24s channel_test=%s max_z=%s worst_ratio=%s "
      "(e^eps=%.4f)\n",
      a.name, std::string(a.verification.Name()), a.channel.flagged ? "FLAGGED" : "pass",
      avec::FormatDouble(a.channel.max_z),
      avec::FormatDouble(a.channel.worst_ratio), std::exp(epsilon));
}

int DemoHashLimitation(const Options& o) {
  avec::HashDemoOptions opts;
  opts.channel_samples = o.demo_samples;
  opts.declared_epsilon = o.demo_epsilon;
  if (o.seed) opts.seed = *o.seed;
  const avec::HashOnlyDemoReport r = avec::HashOnlyLimitationDemo(opts);
  const double per_entity =
      r.declared_epsilon /
      std::max<double>(1.0, avec::EntityDetector::Default().Detect(r.query).size());
  std::cout << "hash-only certification demo\n"
            << "  query: " << r.query << "\n"
            << absl::StrFormat("  declared epsilon=%s k=%u per-entity=%s\n",
                               avec::FormatDouble(r.declared_epsilon), r.k,
                               avec::FormatDouble(per_entity));
  PrintAgent(r.honest, per_entity);
  PrintAgent(r.cheating, per_entity);
  std::cout << "  digests equal when replacements coincide: "
            << (r.digests_equal_when_replacements_coincide ? "yes" : "no")
            << "\n"
            << "  verifier accepts both, channel test separates them: "
            << (r.CounterexampleReproduced() ? "yes" : "no") << "\n";
  return r.CounterexampleReproduced() ? kExitOk : kExitFailure;
}

int DemoGateProbe() {
  const avec::EntityDetector& detector = avec::EntityDetector::Default();
  auto contains_date = [&](std::string_view q) {
    for (const avec::Entity& e : detector.Detect(q)) {
      if (e.category == avec::EntityCategory::kDate) return true;
    }
    return false;
  };
  const avec::AdjacentPair pair{"Refill for John Smith on 2024-01-15",
                                "Refill for John Smith on Monday"};
  std::cout << "deterministic gate probe\n"
            << "  pair: \"" << pair.query << "\" / \"" << pair.neighbour
            << "\"\n";
  bool ok = true;
  auto show = [&](std::string_view name,
                  const std::function<bool(std::string_view)>& gate,
                  bool expect_infinite) {
    absl::StatusOr<avec::GateProbeReport> r =
        avec::DeterministicGateProbe(gate, pair);
    if (!r.ok()) {
      std::cout << absl::StrFormat("  %-22s rejected: %s\n", std::string(name),
                                   std::string(r.status().message()));
      return;
    }
    std::cout << absl::StrFormat(
        "  %-22s gate=(%d,%d) lr_bounded=%s witnessed_epsilon=%s\n",
        std::string(name),
        r->gate_on_query, r->gate_on_neighbour, r->lr_bounded ? "yes" : "no",
        avec::FormatDouble(r->witnessed_epsilon));
    ok = ok && (std::isinf(r->witnessed_epsilon) == expect_infinite);
  };
  show("delegate-if-date", contains_date, true);
  show("constant", [](std::string_view) { return true; }, false);
  avec::RandomStream rng =
      avec::RandomStream::ForUser(1729, 0, avec::StreamTag::kDemo);
  show("randomized (RR)",
       [&](std::string_view q) {
         return *avec::RandomizeGate(contains_date(q), 0.5, rng);
       },
       false);
  return ok ? kExitOk : kExitFailure;
}

int CmdDemo(const Options& o) {
  if (o.demo == "hash-limitation") return DemoHashLimitation(o);
  if (o.demo == "gate-probe") return DemoGateProbe();
  const int a = DemoHashLimitation(o);
  std::cout << "\n";
  const int b = DemoGateProbe();
  return a != kExitOk ? a : b;
}

int CmdAttackGate(const Options& o) {
  const std::vector<double> eps = o.attack_eps.empty()
                                      ? std::vector<double>{0.1, 0.5, 1, 2, 5}
                                      : o.attack_eps;
  avec::RandomStream rng = avec::RandomStream::ForUser(
      o.seed.value_or(1729), 0, avec::StreamTag::kAttack);
  std::cout << absl::StrFormat("gate attack, %u samples per cell, isa=%s\n",
                               o.attack_samples,
                               std::string(avec::kernels::IsaName(
                                   avec::kernels::Active().isa)));
  std::cout << absl::StrFormat("%-8s %-10s %10s %10s %10s %s\n", "eps",
                               "attacker", "advantage", "sigma", "bound",
                               "verdict");
  bool ok = true;
  for (double e : eps) {
    const double bound = avec::GateAdvantageBound(e);
    for (avec::GateAttacker a :
         {avec::GateAttacker::kBayes, avec::GateAttacker::kAlwaysOne,
          avec::GateAttacker::kInvert, avec::GateAttacker::kCoinFlip}) {
      absl::StatusOr<avec::AdvantageEstimate> est =
          avec::EstimateGateAdvantage(e, o.attack_samples, rng, a);
      if (!est.ok()) {
        Err(std::string(est.status().message()));
        return kExitUsage;
      }
      bool pass = est->advantage <= bound + 3 * est->sigma;
      if (a == avec::GateAttacker::kBayes) {
        pass = pass && est->advantage >= bound - 3 * est->sigma;
      }
      ok = ok && pass;
      std::cout << absl::StrFormat("%-8s %-10s %10.6f %10.6f %10.6f %s\n",
                                   avec::FormatDouble(e),
                                   std::string(avec::GateAttackerName(a)), est->advantage,
                                   est->sigma, bound, pass ? "ok" : "VIOLATION");
    }
  }
  return ok ? kExitOk : kExitFailure;
}

int CmdAttackEntity(const Options& o) {
  const std::vector<double> eps = o.attack_eps.empty()
                                      ? std::vector<double>{0.1, 1, 5}
                                      : o.attack_eps;
  const std::vector<uint32_t> ks =
      o.attack_k.empty() ? std::vector<uint32_t>{8, 16, 64} : o.attack_k;
  avec::RandomStream rng = avec::RandomStream::ForUser(
      o.seed.value_or(1729), 1, avec::StreamTag::kAttack);
  std::cout << absl::StrFormat("entity recovery attack, %u samples per cell\n",
                               o.attack_samples);
  std::cout << absl::StrFormat("%-6s %-4s %-14s %10s %10s %10s %s\n", "eps",
                               "k", "estimator", "accuracy", "sigma",
                               "ceiling", "verdict");
  bool ok = true;
  for (double e : eps) {
    for (uint32_t k : ks) {
      const double ceiling = avec::UtilityCeiling(e, k);
      for (avec::RecoveryEstimator est :
           {avec::RecoveryEstimator::kBayes,
            avec::RecoveryEstimator::kFixedToken,
            avec::RecoveryEstimator::kShifted,
            avec::RecoveryEstimator::kUniformGuess}) {
        absl::StatusOr<avec::RecoveryEstimate> r =
            avec::EstimateRecoveryAccuracy(e, k, o.attack_samples, rng, est);
        if (!r.ok()) {
          Err(std::string(r.status().message()));
          return kExitUsage;
        }
        bool pass = r->accuracy <= ceiling + 3 * r->sigma;
        if (est == avec::RecoveryEstimator::kBayes) {
          pass = pass && r->accuracy >= ceiling - 3 * r->sigma;
        }
        ok = ok && pass;
        std::cout << absl::StrFormat(
            "%-6s %-4u %-14s %10.6f %10.6f %10.6f %s\n", avec::FormatDouble(e),
            k, std::string(avec::RecoveryEstimatorName(est)), r->accuracy, r->sigma,
            ceiling, pass ? "ok" : "VIOLATION");
      }
    }
  }
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"AVEC privacy-delegation simulator"};
  app.require_subcommand(0, 1);
  app.add_option("--config", o.config_path, "JSON config file")
      ->check(CLI::ExistingFile);
  app.add_option("--threads", o.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_flag("--print-config", o.print_config,
               "Print the effective config (file plus flags) and exit");

  CLI::App* run = app.add_subcommand("run", "Run one or all scenarios");
  run->add_option("--scenario", o.scenario,
                  "Scenario name, or 'all' (avec-high, avec-medium, "
                  "always-delegate, fixed-eps-0.1, fixed-eps-1.0, "
                  "fixed-eps-5.0, always-local)")
      ->required();
  run->add_option("--trials", o.trials, "Trials per scenario")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", o.seed, "Master seed");
  run->add_option("--out", o.out_dir, "Output directory")
      ->capture_default_str();
  run->add_option("--users", o.users, "Simulated users")
      ->check(CLI::PositiveNumber);
  run->add_option("--queries-per-user", o.queries_per_user,
                  "Queries per user and trial")
      ->check(CLI::PositiveNumber);
  run->add_option("--epsilon-gate", o.epsilon_gate,
                  "Gate RR parameter, or 'off'");
  run->add_option("--tamper-rate", o.tamper_rate,
                  "Probability of corrupting a proof digest");

  CLI::App* report = app.add_subcommand("report", "Aggregate logs and run tests");
  report->add_option("--in", o.in_dir, "Directory with events_*.csv")
      ->required();
  report->add_option("--out", o.report_out,
                     "Output directory (default: --in)");

  CLI::App* demo = app.add_subcommand("demo", "Impossibility demonstrations");
  demo->add_option("which", o.demo, "hash-limitation | gate-probe | all")
      ->check(CLI::IsMember({"hash-limitation", "gate-probe", "all"}))
      ->capture_default_str();
  demo->add_option("--samples", o.demo_samples,
                   "Channel-test samples per input")
      ->capture_default_str();
  demo->add_option("--eps", o.demo_epsilon, "Declared query epsilon")
      ->capture_default_str();
  demo->add_option("--seed", o.seed, "Seed");

  CLI::App* attack = app.add_subcommand("attack", "Adversary sweeps");
  attack->require_subcommand(1);
  CLI::App* gate = attack->add_subcommand("gate", "Attack the released gate bit");
  gate->add_option("--eps", o.attack_eps, "Gate epsilons")->delimiter(',');
  gate->add_option("--samples", o.attack_samples, "Samples per cell")
      ->capture_default_str();
  gate->add_option("--seed", o.seed, "Seed");
  CLI::App* entity =
      attack->add_subcommand("entity", "Recover entities from k-ary RR output");
  entity->add_option("--eps", o.attack_eps, "Epsilons")->delimiter(',');
  entity->add_option("--k", o.attack_k, "Vocabulary sizes")->delimiter(',');
  entity->add_option("--samples", o.attack_samples, "Samples per cell")
      ->capture_default_str();
  entity->add_option("--seed", o.seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (o.print_config) {
    std::optional<avec::Config> config = BuildConfig(o);
    if (!config) return kExitUsage;
    std::cout << avec::ConfigToJson(*config).dump(2) << "\n";
    return kExitOk;
  }
  if (*run) return CmdRun(o);
  if (*report) return CmdReport(o);
  if (*demo) return CmdDemo(o);
  if (*gate) return CmdAttackGate(o);
  if (*entity) return CmdAttackEntity(o);
  std::cout << app.help();
  return kExitUsage;
}
