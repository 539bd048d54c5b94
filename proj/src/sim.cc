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

#include "avec/sim.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <thread>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "avec/budgeting.h"
#include "avec/gating.h"
#include "avec/random.h"
#include "avec/strings.h"
#include "avec/transform.h"
#include "avec/verification.h"
#include "json.hpp"

namespace avec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int64_t kSecondsPerTrial = 86400;
constexpr int64_t kSecondsPerUser = 600;
constexpr int64_t kSecondsPerQuery = 60;

struct PolicyInfo {
  Policy policy;
  std::string_view name;
};

constexpr PolicyInfo kPolicies[] = {
    {Policy::kAvecHigh, "avec-high"},
    {Policy::kAvecMedium, "avec-medium"},
    {Policy::kAlwaysDelegate, "always-delegate"},
    {Policy::kFixedEps01, "fixed-eps-0.1"},
    {Policy::kFixedEps1, "fixed-eps-1.0"},
    {Policy::kFixedEps5, "fixed-eps-5.0"},
    {Policy::kAlwaysLocal, "always-local"},
};

constexpr QualityLabel kLabels[] = {
    QualityLabel::kLocalHighConfidence, QualityLabel::kLocalFallback,
    QualityLabel::kRemoteHigh,          QualityLabel::kRemoteModerate,
    QualityLabel::kRemoteLight,         QualityLabel::kRemoteUnmodified,
};

std::vector<std::string_view> SplitView(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  for (;;) {
    const size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
bool ParseNumber(std::string_view s, T& out) {
  if constexpr (std::is_floating_point_v<T>) {
    if (s == "inf") {
      out = kInf;
      return true;
    }
    if (s == "-inf") {
      out = -kInf;
      return true;
    }
  }
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool ParseBool(std::string_view s, bool& out) {
  if (s == "0" || s == "1") {
    out = s == "1";
    return true;
  }
  return false;
}

void CorruptDigest(std::string& digest) {
  if (!digest.empty()) digest[0] = digest[0] == '0' ? '1' : '0';
}

}  // namespace

std::string_view PolicyName(Policy policy) {
  for (const PolicyInfo& p : kPolicies) {
    if (p.policy == policy) return p.name;
  }
  return "?";
}

absl::StatusOr<Policy> ParsePolicy(std::string_view name) {
  for (const PolicyInfo& p : kPolicies) {
    if (p.name == name) return p.policy;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown scenario '", std::string(name), "'"));
}

const std::vector<Policy>& AllPolicies() {
  static const std::vector<Policy> kAll = [] {
    std::vector<Policy> v;
    for (const PolicyInfo& p : kPolicies) v.push_back(p.policy);
    return v;
  }();
  return kAll;
}

std::optional<double> FixedEpsilon(Policy policy) {
  switch (policy) {
    case Policy::kFixedEps01:
      return 0.1;
    case Policy::kFixedEps1:
      return 1.0;
    case Policy::kFixedEps5:
      return 5.0;
    default:
      return std::nullopt;
  }
}

bool IsAvecPolicy(Policy policy) {
  return policy == Policy::kAvecHigh || policy == Policy::kAvecMedium;
}

bool PolicyIsCapped(Policy policy) {
  return IsAvecPolicy(policy) || policy == Policy::kAlwaysLocal;
}

absl::StatusOr<QueryPool> QueryPool::FromJson(std::string_view text) {
  const nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("query pool is not a JSON object");
  }
  QueryPool pool;
  try {
    pool.version_ = j.at("pool_version").get<std::string>();
    std::set<std::string> ids;
    for (const nlohmann::json& q : j.at("queries")) {
      PoolQuery pq;
      pq.id = q.at("id").get<std::string>();
      pq.domain = q.at("domain").get<std::string>();
      pq.text = q.at("text").get<std::string>();
      pq.expected_entities = q.value("expected_entities", 0);
      pq.cached = q.value("cached", false);
      if (pq.text.empty() || pq.domain.empty()) {
        return absl::InvalidArgumentError(
            absl::StrCat("query ", pq.id, " has empty text or domain"));
      }
      if (!ids.insert(pq.id).second) {
        return absl::InvalidArgumentError(
            absl::StrCat("duplicate query id ", pq.id));
      }
      pool.queries_.push_back(std::move(pq));
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed query pool: ", e.what()));
  }
  if (pool.queries_.empty()) {
    return absl::InvalidArgumentError("query pool is empty");
  }
  return pool;
}

const QueryPool& QueryPool::Default() {
  static const QueryPool* const kPool =
      new QueryPool(*QueryPool::FromJson(DefaultQueryPoolJson()));
  return *kPool;
}

const std::vector<std::string>& QueryEventColumns() {
  static const std::vector<std::string> kColumns = {
      "trial_id",        "user_id",          "query_id",
      "domain",          "delegated",        "released_bit",
      "epsilon_spent",   "epsilon_gate",     "epsilon_cumulative",
      "cost",            "latency_ms",       "quality_label",
      "verification",    "entity_count",     "k_effective",
      "epsilon_max",     "remaining_budget", "proof_digest",
  };
  return kColumns;
}

std::string QueryEventCsvHeader() {
  return absl::StrJoin(QueryEventColumns(), ",");
}

std::string QueryEventCsvRow(const QueryEvent& e) {
  return absl::StrCat(
      e.trial_id, ",", e.user_id, ",", e.query_id, ",", e.domain, ",",
      e.delegated ? "1" : "0", ",", e.released_bit ? "1" : "0", ",",
      FormatDouble(e.epsilon_spent), ",", FormatDouble(e.epsilon_gate), ",",
      FormatDouble(e.epsilon_cumulative), ",", FormatDouble(e.cost), ",",
      FormatDouble(e.latency_ms), ",",
      std::string(QualityLabelName(e.quality_label)), ",", e.verification,
      ",", e.entity_count, ",", e.k_effective, ",",
      FormatDouble(e.epsilon_max), ",", FormatDouble(e.remaining_budget), ",",
      e.proof_digest);
}

absl::StatusOr<std::vector<QueryEvent>> ParseQueryEventCsv(
    std::string_view text) {
  std::vector<std::string_view> lines = SplitView(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0] != QueryEventCsvHeader()) {
    return absl::InvalidArgumentError("missing or unexpected CSV header");
  }
  const size_t n_cols = QueryEventColumns().size();
  std::vector<QueryEvent> events;
  events.reserve(lines.size() - 1);
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string_view> f = SplitView(lines[i], ',');
    auto bad = [&](std::string_view what) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", i + 1, ": bad ", std::string(what)));
    };
    if (f.size() != n_cols) return bad("column count");
    QueryEvent e;
    if (!ParseNumber(f[0], e.trial_id)) return bad("trial_id");
    if (!ParseNumber(f[1], e.user_id)) return bad("user_id");
    e.query_id = std::string(f[2]);
    e.domain = std::string(f[3]);
    if (!ParseBool(f[4], e.delegated)) return bad("delegated");
    if (!ParseBool(f[5], e.released_bit)) return bad("released_bit");
    if (!ParseNumber(f[6], e.epsilon_spent)) return bad("epsilon_spent");
    if (!ParseNumber(f[7], e.epsilon_gate)) return bad("epsilon_gate");
    if (!ParseNumber(f[8], e.epsilon_cumulative)) {
      return bad("epsilon_cumulative");
    }
    if (!ParseNumber(f[9], e.cost)) return bad("cost");
    if (!ParseNumber(f[10], e.latency_ms)) return bad("latency_ms");
    bool label_ok = false;
    for (QualityLabel l : kLabels) {
      if (QualityLabelName(l) == f[11]) {
        e.quality_label = l;
        label_ok = true;
      }
    }
    if (!label_ok) return bad("quality_label");
    e.verification = std::string(f[12]);
    if (!ParseNumber(f[13], e.entity_count)) return bad("entity_count");
    if (!ParseNumber(f[14], e.k_effective)) return bad("k_effective");
    if (!ParseNumber(f[15], e.epsilon_max)) return bad("epsilon_max");
    if (!ParseNumber(f[16], e.remaining_budget)) {
      return bad("remaining_budget");
    }
    e.proof_digest = std::string(f[17]);
    events.push_back(std::move(e));
  }
  return events;
}

std::vector<TrialAggregates> AggregateEvents(
    const std::vector<QueryEvent>& events) {
  std::map<int, std::vector<const QueryEvent*>> by_trial;
  for (const QueryEvent& e : events) by_trial[e.trial_id].push_back(&e);

  std::vector<TrialAggregates> out;
  for (const auto& [trial_id, list] : by_trial) {
    TrialAggregates a;
    a.trial_id = trial_id;
    a.events = list.size();
    double cost = 0.0, delegated_cost = 0.0, latency = 0.0;
    std::map<int, double> final_spend;
    std::vector<QueryEvent> trial_events;
    for (const QueryEvent* e : list) {
      cost += e->cost;
      latency += e->latency_ms;
      if (e->delegated) {
        ++a.delegated;
        delegated_cost += e->cost;
      }
      if (!e->proof_digest.empty()) {
        ++a.proofs;
        if (e->verification == "Verified") ++a.verified;
      }
      final_spend[e->user_id] = e->epsilon_cumulative;
      trial_events.push_back(*e);
    }
    const double n = static_cast<double>(a.events);
    a.delegation_rate = static_cast<double>(a.delegated) / n;
    a.mean_cost = cost / n;
    a.mean_latency_ms = latency / n;
    a.mean_delegated_cost =
        a.delegated > 0 ? delegated_cost / static_cast<double>(a.delegated)
                        : 0.0;
    double spend = 0.0;
    for (const auto& [user, total] : final_spend) spend += total;
    a.mean_epsilon_spent = spend / static_cast<double>(final_spend.size());
    a.verification_rate =
        a.proofs > 0
            ? static_cast<double>(a.verified) / static_cast<double>(a.proofs)
            : 1.0;
    a.budget_violations = CountBudgetViolations(trial_events);
    out.push_back(a);
  }
  return out;
}

size_t CountBudgetViolations(const std::vector<QueryEvent>& events) {
  struct Stream {
    double entity_sum = 0.0;
    bool violated = false;
  };
  std::map<std::pair<int, int>, Stream> streams;
  for (const QueryEvent& e : events) {
    Stream& s = streams[{e.trial_id, e.user_id}];
    s.entity_sum += e.epsilon_spent;
    if (e.epsilon_cumulative > e.epsilon_max || s.entity_sum > e.epsilon_max) {
      s.violated = true;
    }
  }
  size_t n = 0;
  for (const auto& [key, s] : streams) n += s.violated;
  return n;
}

absl::StatusOr<Simulator> Simulator::Create(Config config,
                                            const QueryPool& pool) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  if (static_cast<size_t>(config.sim.n_queries_per_user) > pool.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("n_queries_per_user ", config.sim.n_queries_per_user,
                     " exceeds pool size ", pool.size()));
  }
  absl::StatusOr<EntityDetector> detector =
      EntityDetector::Create(config.transform.patterns);
  if (!detector.ok()) return detector.status();

  Simulator sim;
  sim.config_ = std::move(config);
  sim.detector_ = *std::move(detector);
  sim.queries_ = pool.queries();
  std::vector<Entity> all;
  for (const PoolQuery& q : sim.queries_) {
    sim.entities_.push_back(sim.detector_.Detect(q.text));
    all.insert(all.end(), sim.entities_.back().begin(),
               sim.entities_.back().end());
  }
  sim.vocab_ = VocabularySet::Build(all, sim.config_.transform.vocab_min,
                                    sim.config_.transform.vocab_max);
  for (std::vector<Entity>& e : sim.entities_) sim.vocab_.AssignIds(e);
  return sim;
}

absl::StatusOr<Simulator::UserRun> Simulator::RunUser(Policy policy,
                                                      int trial_id,
                                                      int user_id) const {
  const Config& c = config_;
  const uint64_t trial_seed = c.sim.master_seed + static_cast<uint64_t>(trial_id);
  const uint32_t uid = static_cast<uint32_t>(user_id);
  auto stream = [&](StreamTag tag) {
    return RandomStream::ForUser(trial_seed, uid, tag);
  };

  RandomStream config_rng = stream(StreamTag::kUserConfig);
  const double epsilon_max =
      config_rng.Uniform(c.sim.epsilon_max_min, c.sim.epsilon_max_max);
  const UserConfig user = UserConfig::For(policy == Policy::kAvecHigh
                                              ? PrivacyPreference::kHigh
                                              : PrivacyPreference::kMedium,
                                          epsilon_max, c.budgeting);
  if (absl::Status s = user.Validate(); !s.ok()) return s;

  // Partial Fisher-Yates: the first n_queries slots are this user's queries.
  const size_t pool_size = queries_.size();
  const size_t n_queries = static_cast<size_t>(c.sim.n_queries_per_user);
  std::vector<size_t> order(pool_size);
  std::iota(order.begin(), order.end(), size_t{0});
  RandomStream shuffle_rng = stream(StreamTag::kShuffle);
  for (size_t i = 0; i < n_queries; ++i) {
    const size_t span = pool_size - i;
    const size_t j =
        i + std::min(static_cast<size_t>(shuffle_rng.Uniform() *
                                         static_cast<double>(span)),
                     span - 1);
    std::swap(order[i], order[j]);
  }

  const bool capped = PolicyIsCapped(policy);
  PrivacyOdometer odometer(capped ? epsilon_max : kInf,
                           c.accounting.alpha_grid);
  RandomStream confidence_rng = stream(StreamTag::kConfidence);
  RandomStream noise_rng = stream(StreamTag::kBudgetNoise);
  RandomStream gate_rng = stream(StreamTag::kGate);
  RandomStream transform_rng = stream(StreamTag::kTransform);
  RandomStream translation_rng = stream(StreamTag::kTranslationCost);
  RandomStream remote_rng = stream(StreamTag::kRemote);
  RandomStream local_rng = stream(StreamTag::kLocal);
  RandomStream tamper_rng = stream(StreamTag::kTamper);

  auto commit = [&](const MechanismSpec& spec) -> absl::Status {
    absl::Status s = odometer.Append(spec);
    if (!s.ok()) {
      return absl::InternalError(absl::StrCat(
          "user ", user_id, " trial ", trial_id, ": ", s.ToString()));
    }
    return s;
  };

  UserRun run;
  run.events.reserve(n_queries);
  for (size_t n = 0; n < n_queries; ++n) {
    const PoolQuery& q = queries_[order[n]];
    const std::vector<Entity>& entities = entities_[order[n]];
    QueryEvent ev;
    ev.trial_id = trial_id;
    ev.user_id = user_id;
    ev.query_id = q.id;
    ev.domain = q.domain;
    ev.entity_count = static_cast<int>(entities.size());
    ev.epsilon_max = odometer.epsilon_max();
    ev.verification = "NotApplicable";

    bool delegate = false;
    double epsilon_entities = 0.0;
    if (IsAvecPolicy(policy)) {
      const QueryFeatures features{q.domain, entities.size(), q.cached};
      const double sensitivity = SensitivityScore(features, c.budgeting);
      const double confidence =
          LocalConfidence(features, sensitivity, c.budgeting, confidence_rng);
      delegate = RouteQuery(confidence, user.confidence_threshold) ==
                 Route::kDelegate;

      double epsilon_gate = c.gating.epsilon_gate;
      if (std::isfinite(epsilon_gate)) {
        epsilon_gate = FitSplitBudget(odometer.pure_total(),
                                      std::min(epsilon_gate,
                                               odometer.remaining()),
                                      1, odometer.epsilon_max());
      }
      absl::StatusOr<GateRelease> gate =
          ReleaseGate(delegate, epsilon_gate, gate_rng);
      if (!gate.ok()) return gate.status();
      if (std::isfinite(epsilon_gate)) {
        if (absl::Status s = commit(MechanismSpec::BinaryRr(epsilon_gate));
            !s.ok()) {
          return s;
        }
      }
      ev.released_bit = gate->released_bit;
      ev.epsilon_gate = epsilon_gate;

      if (delegate) {
        const double eta =
            LaplaceInverseCdf(noise_rng.Uniform(), user.LaplaceScale());
        const MechanismSpec release =
            MechanismSpec::Laplace(user.delta_f, user.LaplaceScale());
        if (odometer.CanAfford(release.PureEpsilon())) {
          if (absl::Status s = commit(release); !s.ok()) return s;
          const BudgetProposal proposal = ProposeBudgetWithNoise(
              user, static_cast<int>(n), sensitivity, confidence, eta,
              odometer.remaining());
          epsilon_entities = proposal.effective_eps;
        }
      }
    } else {
      delegate = policy != Policy::kAlwaysLocal;
      ev.released_bit = delegate;
      if (std::optional<double> fixed = FixedEpsilon(policy)) {
        epsilon_entities = *fixed;
      }
    }

    if (!delegate) {
      const ResponseRecord r = LocalRespond(QualityLabel::kLocalHighConfidence,
                                            local_rng, c.local);
      ev.cost = r.cost_units;
      ev.latency_ms = r.latency_ms;
      ev.quality_label = r.quality_label;
    } else if (policy == Policy::kAlwaysDelegate) {
      const ResponseRecord r =
          RemoteRespond(PrivatizationLevel::kNone, remote_rng, c.remote);
      ev.delegated = true;
      ev.cost = r.cost_units;
      ev.latency_ms = r.latency_ms;
      ev.quality_label = r.quality_label;
    } else {
      const int m = std::max<int>(static_cast<int>(entities.size()), 1);
      epsilon_entities = FitSplitBudget(odometer.pure_total(),
                                        epsilon_entities, m,
                                        odometer.epsilon_max());
      TransformParams params;
      params.policy_id = std::string(PolicyName(policy));
      params.timestamp = c.sim.base_epoch + trial_id * kSecondsPerTrial +
                         user_id * kSecondsPerUser +
                         static_cast<int64_t>(n) * kSecondsPerQuery;
      absl::StatusOr<TransformOutcome> outcome =
          TransformQuery(q.text, entities, epsilon_entities, params, vocab_,
                         transform_rng, c.transform.thresholds);
      if (!outcome.ok()) return outcome.status();
      for (const MechanismSpec& charge : outcome->charges) {
        if (absl::Status s = commit(charge); !s.ok()) return s;
      }
      const Overhead overhead = SimulateTranslationOverhead(
          q.text.size(), translation_rng, c.transform.translation);

      TransformationProof& proof = outcome->query.proof;
      if (c.transform.tamper_rate > 0.0 &&
          tamper_rng.Uniform() < c.transform.tamper_rate) {
        CorruptDigest(proof.digest_hex);
      }
      const VerificationResult verdict = VerifyProof(proof);
      ev.verification = std::string(verdict.Name());
      ev.proof_digest = proof.digest_hex;
      ev.k_effective = proof.declared_params.k;
      ev.epsilon_spent = epsilon_entities;

      const ResponseRecord r =
          verdict.verified()
              ? RemoteRespond(outcome->query, remote_rng, c.remote)
              : LocalRespond(QualityLabel::kLocalFallback, local_rng, c.local);
      ev.delegated = verdict.verified();
      ev.cost = overhead.cost_units + r.cost_units;
      ev.latency_ms = overhead.latency_ms + r.latency_ms;
      ev.quality_label = r.quality_label;
    }
    ev.epsilon_cumulative = odometer.pure_total();
    ev.remaining_budget = odometer.remaining();
    run.events.push_back(std::move(ev));
  }

  UserLedger& ledger = run.ledger;
  ledger.user_id = user_id;
  ledger.epsilon_max = epsilon_max;
  ledger.capped = capped;
  ledger.pure_total = odometer.pure_total();
  ledger.entries = odometer.entries().size();
  ledger.rdp_totals = odometer.rdp_totals();
  absl::StatusOr<DpGuarantee> dp = ToDp(odometer, c.accounting.delta_star);
  if (!dp.ok()) return dp.status();
  ledger.dp = *dp;
  absl::StatusOr<DpGuarantee> session =
      SessionGuarantee(odometer, static_cast<int>(n_queries),
                       c.accounting.delta_ent, c.accounting.delta_star);
  if (!session.ok()) return session.status();
  ledger.session = *session;
  return run;
}

TrialResult Simulator::Assemble(int trial_id, std::vector<UserRun> users) {
  TrialResult trial;
  trial.trial_id = trial_id;
  for (UserRun& u : users) {
    trial.events.insert(trial.events.end(),
                        std::make_move_iterator(u.events.begin()),
                        std::make_move_iterator(u.events.end()));
    trial.ledgers.push_back(std::move(u.ledger));
  }
  std::vector<TrialAggregates> aggregates = AggregateEvents(trial.events);
  if (!aggregates.empty()) trial.aggregates = aggregates.front();
  trial.aggregates.trial_id = trial_id;
  return trial;
}

absl::StatusOr<TrialResult> Simulator::RunTrial(Policy policy,
                                                int trial_id) const {
  std::vector<UserRun> users;
  for (int u = 0; u < config_.sim.n_users; ++u) {
    absl::StatusOr<UserRun> run = RunUser(policy, trial_id, u);
    if (!run.ok()) return run.status();
    users.push_back(*std::move(run));
  }
  return Assemble(trial_id, std::move(users));
}

absl::StatusOr<ScenarioResult> Simulator::RunScenario(Policy policy,
                                                      int n_trials) const {
  const size_t n_users = static_cast<size_t>(config_.sim.n_users);
  const size_t n_items = static_cast<size_t>(n_trials) * n_users;
  std::vector<absl::StatusOr<UserRun>> slots(
      n_items, absl::UnknownError("not run"));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < n_items; i = next.fetch_add(1)) {
      slots[i] = RunUser(policy, static_cast<int>(i / n_users),
                         static_cast<int>(i % n_users));
    }
  };
  const size_t n_workers = std::min<size_t>(
      static_cast<size_t>(std::max(config_.sim.threads, 1)), n_items);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  ScenarioResult result;
  result.policy = policy;
  for (int t = 0; t < n_trials; ++t) {
    std::vector<UserRun> users;
    for (size_t u = 0; u < n_users; ++u) {
      absl::StatusOr<UserRun>& slot = slots[t * n_users + u];
      if (!slot.ok()) return slot.status();
      users.push_back(*std::move(slot));
    }
    result.trials.push_back(Assemble(t, std::move(users)));
  }
  return result;
}

}  // namespace avec
