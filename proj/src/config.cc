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

#include "avec/config.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"

namespace avec {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Reads known keys out of one JSON object and remembers what it saw, so
// leftovers can be reported as unknown.
class Group {
 public:
  Group(const json& parent, std::string name) : name_(std::move(name)) {
    if (!parent.contains(name_)) return;
    node_ = &parent.at(name_);
    if (!node_->is_object()) Fail("must be an object");
  }
  Group(const json* node, std::string name)
      : name_(std::move(name)), node_(node) {}

  bool present() const { return node_ != nullptr && node_->is_object(); }
  const json* Child(const std::string& key) {
    if (!present() || !node_->contains(key)) return nullptr;
    seen_.insert(key);
    return &node_->at(key);
  }

  template <typename T>
  void Read(const std::string& key, T& out) {
    const json* v = Child(key);
    if (v == nullptr) return;
    try {
      if constexpr (std::is_integral_v<T>) {
        if (!v->is_number_integer()) throw json::type_error::create(302, "", v);
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v->is_number()) throw json::type_error::create(302, "", v);
      }
      out = v->get<T>();
    } catch (const json::exception&) {
      Fail(absl::StrCat("key '", key, "' has the wrong type"));
    }
  }

  // Accepts a number or the string "off" (+inf).
  void ReadEpsilon(const std::string& key, double& out) {
    const json* v = Child(key);
    if (v == nullptr) return;
    if (v->is_string() && v->get<std::string>() == "off") {
      out = std::numeric_limits<double>::infinity();
    } else if (v->is_number()) {
      out = v->get<double>();
    } else {
      Fail(absl::StrCat("key '", key, "' must be a number or \"off\""));
    }
  }

  void ReadRange(const std::string& key, ModifierRange& out) {
    const json* v = Child(key);
    if (v == nullptr) return;
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() ||
        !(*v)[1].is_number()) {
      Fail(absl::StrCat("key '", key, "' must be [lo, hi]"));
      return;
    }
    out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
  }

  void Fail(const std::string& message) {
    if (error_.empty()) error_ = absl::StrCat(name_, ": ", message);
  }

  absl::Status Finish() const {
    if (!error_.empty()) return absl::InvalidArgumentError(error_);
    if (!present()) return absl::OkStatus();
    for (auto it = node_->begin(); it != node_->end(); ++it) {
      if (!seen_.contains(it.key())) {
        return absl::InvalidArgumentError(
            absl::StrCat(name_, ": unknown key '", it.key(), "'"));
      }
    }
    return absl::OkStatus();
  }

 private:
  std::string name_;
  const json* node_ = nullptr;
  std::set<std::string> seen_;
  std::string error_;
};

ordered_json EpsilonJson(double eps) {
  if (std::isinf(eps)) return "off";
  return eps;
}

ordered_json RangeJson(const ModifierRange& r) { return {r.lo, r.hi}; }

absl::Status Check(bool ok, std::string_view what) {
  if (ok) return absl::OkStatus();
  return absl::InvalidArgumentError(absl::StrCat("invalid config: ", std::string(what)));
}

absl::Status CheckRange(double lo, double hi, std::string_view what) {
  return Check(std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && lo <= hi,
               what);
}

}  // namespace

absl::Status Config::Validate() const {
  const BudgetingConstants& b = budgeting;
  std::vector<absl::Status> checks = {
      Check(b.epsilon_base_high > 0.0, "budgeting.epsilon_base_high > 0"),
      Check(b.epsilon_base_medium > 0.0, "budgeting.epsilon_base_medium > 0"),
      Check(b.confidence_threshold >= 0.0 && b.confidence_threshold <= 1.0,
            "budgeting.confidence_threshold in [0, 1]"),
      Check(b.kappa > 0.0, "budgeting.kappa > 0"),
      Check(b.delta_f > 0.0 && std::isfinite(b.delta_f),
            "budgeting.delta_f > 0"),
      Check(b.epsilon_eta > 0.0 && std::isfinite(b.epsilon_eta),
            "budgeting.epsilon_eta > 0"),
      Check(b.default_domain_weight >= 0.0 && b.default_domain_weight <= 1.0,
            "budgeting.default_domain_weight in [0, 1]"),
      Check(b.entity_weight >= 0.0, "budgeting.entity_weight >= 0"),
      Check(b.cache_hit_confidence >= b.confidence_threshold &&
                b.cache_hit_confidence <= 1.0,
            "budgeting.cache_hit_confidence in [threshold, 1]"),
      Check(b.confidence_jitter >= 0.0, "budgeting.confidence_jitter >= 0"),
      Check(gating.epsilon_gate >= 0.0, "gating.epsilon_gate >= 0"),
      Check(transform.vocab_min >= 2 &&
                transform.vocab_min <= transform.vocab_max,
            "transform.vocab_min in [2, vocab_max]"),
      Check(transform.thresholds.high_below <=
                    transform.thresholds.moderate_below &&
                transform.thresholds.moderate_below <=
                    transform.thresholds.light_below,
            "transform.level_thresholds nondecreasing"),
      CheckRange(transform.translation.latency_base_min_ms,
                 transform.translation.latency_base_max_ms,
                 "transform.translation latency range"),
      CheckRange(transform.translation.cost_base_min,
                 transform.translation.cost_base_max,
                 "transform.translation cost range"),
      Check(transform.tamper_rate >= 0.0 && transform.tamper_rate <= 1.0,
            "transform.tamper_rate in [0, 1]"),
      CheckRange(remote.latency_min_ms, remote.latency_max_ms,
                 "remote latency range"),
      CheckRange(remote.cost_min, remote.cost_max, "remote cost range"),
      CheckRange(remote.high.lo, remote.high.hi, "remote.modifiers.high"),
      CheckRange(remote.moderate.lo, remote.moderate.hi,
                 "remote.modifiers.moderate"),
      CheckRange(remote.light.lo, remote.light.hi, "remote.modifiers.light"),
      CheckRange(remote.none.lo, remote.none.hi, "remote.modifiers.none"),
      CheckRange(local.latency_min_ms, local.latency_max_ms,
                 "local latency range"),
      Check(local.cost_units >= 0.0, "local.cost_units >= 0"),
      Check(accounting.delta_star > 0.0 && accounting.delta_star < 1.0,
            "accounting.delta_star in (0, 1)"),
      Check(accounting.delta_ent >= 0.0 && accounting.delta_ent < 1.0,
            "accounting.delta_ent in [0, 1)"),
      Check(!accounting.alpha_grid.empty(), "accounting.alpha_grid nonempty"),
      Check(sim.n_users >= 1, "sim.n_users >= 1"),
      Check(sim.n_queries_per_user >= 1, "sim.n_queries_per_user >= 1"),
      Check(sim.n_trials >= 1, "sim.n_trials >= 1"),
      Check(sim.epsilon_max_min > 0.0 &&
                sim.epsilon_max_min <= sim.epsilon_max_max &&
                std::isfinite(sim.epsilon_max_max),
            "sim.epsilon_max range"),
      Check(sim.threads >= 1, "sim.threads >= 1"),
      Check(stats.bootstrap_resamples >= 1, "stats.bootstrap_resamples >= 1"),
      Check(stats.ci_level > 0.0 && stats.ci_level < 1.0,
            "stats.ci_level in (0, 1)"),
  };
  for (double a : accounting.alpha_grid) {
    checks.push_back(
        Check(a > 1.0 && std::isfinite(a), "accounting.alpha_grid > 1"));
  }
  for (const auto& [domain, w] : b.domain_weights) {
    checks.push_back(Check(w >= 0.0 && w <= 1.0,
                           "budgeting.domain_weights in [0, 1]"));
  }
  for (const absl::Status& s : checks) {
    if (!s.ok()) return s;
  }
  absl::StatusOr<EntityDetector> detector =
      EntityDetector::Create(transform.patterns);
  return detector.status();
}

ordered_json ConfigToJson(const Config& c) {
  const BudgetingConstants& b = c.budgeting;
  ordered_json weights = ordered_json::object();
  for (const auto& [domain, w] : b.domain_weights) weights[domain] = w;
  ordered_json patterns = ordered_json::array();
  for (const EntityPattern& p : c.transform.patterns) {
    patterns.push_back(
        {{"category", CategoryName(p.category)}, {"regex", p.regex}});
  }
  const TranslationCostModel& t = c.transform.translation;
  ordered_json j;
  j["schema_version"] = kConfigSchemaVersion;
  j["budgeting"] = {
      {"epsilon_base_high", b.epsilon_base_high},
      {"epsilon_base_medium", b.epsilon_base_medium},
      {"confidence_threshold", b.confidence_threshold},
      {"kappa", b.kappa},
      {"delta_f", b.delta_f},
      {"epsilon_eta", b.epsilon_eta},
      {"domain_weights", weights},
      {"default_domain_weight", b.default_domain_weight},
      {"entity_weight", b.entity_weight},
      {"cache_hit_confidence", b.cache_hit_confidence},
      {"confidence_intercept", b.confidence_intercept},
      {"confidence_sensitivity_slope", b.confidence_sensitivity_slope},
      {"confidence_entity_penalty", b.confidence_entity_penalty},
      {"confidence_jitter", b.confidence_jitter},
  };
  j["gating"] = {{"epsilon_gate", EpsilonJson(c.gating.epsilon_gate)}};
  j["transform"] = {
      {"patterns", patterns},
      {"vocab_min", c.transform.vocab_min},
      {"vocab_max", c.transform.vocab_max},
      {"level_thresholds",
       {{"high_below", c.transform.thresholds.high_below},
        {"moderate_below", c.transform.thresholds.moderate_below},
        {"light_below", c.transform.thresholds.light_below}}},
      {"translation",
       {{"latency_base_min_ms", t.latency_base_min_ms},
        {"latency_base_max_ms", t.latency_base_max_ms},
        {"latency_per_char_ms", t.latency_per_char_ms},
        {"cost_base_min", t.cost_base_min},
        {"cost_base_max", t.cost_base_max},
        {"cost_per_char", t.cost_per_char}}},
      {"tamper_rate", c.transform.tamper_rate},
  };
  j["remote"] = {
      {"latency_min_ms", c.remote.latency_min_ms},
      {"latency_max_ms", c.remote.latency_max_ms},
      {"cost_min", c.remote.cost_min},
      {"cost_max", c.remote.cost_max},
      {"modifiers",
       {{"high", RangeJson(c.remote.high)},
        {"moderate", RangeJson(c.remote.moderate)},
        {"light", RangeJson(c.remote.light)},
        {"none", RangeJson(c.remote.none)}}},
  };
  j["local"] = {
      {"latency_min_ms", c.local.latency_min_ms},
      {"latency_max_ms", c.local.latency_max_ms},
      {"cost_units", c.local.cost_units},
  };
  j["accounting"] = {
      {"delta_star", c.accounting.delta_star},
      {"delta_ent", c.accounting.delta_ent},
      {"alpha_grid", c.accounting.alpha_grid},
  };
  j["sim"] = {
      {"n_users", c.sim.n_users},
      {"n_queries_per_user", c.sim.n_queries_per_user},
      {"n_trials", c.sim.n_trials},
      {"master_seed", c.sim.master_seed},
      {"epsilon_max_min", c.sim.epsilon_max_min},
      {"epsilon_max_max", c.sim.epsilon_max_max},
      {"threads", c.sim.threads},
      {"base_epoch", c.sim.base_epoch},
  };
  j["stats"] = {
      {"bootstrap_resamples", c.stats.bootstrap_resamples},
      {"ci_level", c.stats.ci_level},
  };
  return j;
}

absl::StatusOr<Config> ConfigFromJson(const json& j, Config c) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  Group root(&j, "config");
  int version = kConfigSchemaVersion;
  root.Read("schema_version", version);
  if (version != kConfigSchemaVersion) {
    return absl::InvalidArgumentError(
        absl::StrCat("unsupported config schema_version ", version));
  }
  std::vector<absl::Status> results;

  Group budgeting(j, "budgeting");
  root.Child("budgeting");
  BudgetingConstants& b = c.budgeting;
  budgeting.Read("epsilon_base_high", b.epsilon_base_high);
  budgeting.Read("epsilon_base_medium", b.epsilon_base_medium);
  budgeting.Read("confidence_threshold", b.confidence_threshold);
  budgeting.Read("kappa", b.kappa);
  budgeting.Read("delta_f", b.delta_f);
  budgeting.Read("epsilon_eta", b.epsilon_eta);
  if (const json* w = budgeting.Child("domain_weights")) {
    if (!w->is_object()) {
      budgeting.Fail("domain_weights must be an object");
    } else {
      b.domain_weights.clear();
      for (auto it = w->begin(); it != w->end(); ++it) {
        if (!it->is_number()) {
          budgeting.Fail("domain weights must be numbers");
          break;
        }
        b.domain_weights[it.key()] = it->get<double>();
      }
    }
  }
  budgeting.Read("default_domain_weight", b.default_domain_weight);
  budgeting.Read("entity_weight", b.entity_weight);
  budgeting.Read("cache_hit_confidence", b.cache_hit_confidence);
  budgeting.Read("confidence_intercept", b.confidence_intercept);
  budgeting.Read("confidence_sensitivity_slope",
                 b.confidence_sensitivity_slope);
  budgeting.Read("confidence_entity_penalty", b.confidence_entity_penalty);
  budgeting.Read("confidence_jitter", b.confidence_jitter);
  results.push_back(budgeting.Finish());

  Group gating(j, "gating");
  root.Child("gating");
  gating.ReadEpsilon("epsilon_gate", c.gating.epsilon_gate);
  results.push_back(gating.Finish());

  Group transform(j, "transform");
  root.Child("transform");
  if (const json* p = transform.Child("patterns")) {
    std::vector<EntityPattern> patterns;
    if (!p->is_array()) transform.Fail("patterns must be an array");
    for (const json& entry : p->is_array() ? *p : json::array()) {
      if (!entry.is_object() || !entry.contains("category") ||
          !entry.contains("regex") || !entry["category"].is_string() ||
          !entry["regex"].is_string() || entry.size() != 2) {
        transform.Fail("each pattern needs string 'category' and 'regex'");
        break;
      }
      absl::StatusOr<EntityCategory> cat =
          ParseCategory(entry["category"].get<std::string>());
      if (!cat.ok()) {
        transform.Fail(std::string(cat.status().message()));
        break;
      }
      patterns.push_back({*cat, entry["regex"].get<std::string>()});
    }
    c.transform.patterns = std::move(patterns);
  }
  transform.Read("vocab_min", c.transform.vocab_min);
  transform.Read("vocab_max", c.transform.vocab_max);
  {
    Group levels(transform.Child("level_thresholds"),
                 "transform.level_thresholds");
    levels.Read("high_below", c.transform.thresholds.high_below);
    levels.Read("moderate_below", c.transform.thresholds.moderate_below);
    levels.Read("light_below", c.transform.thresholds.light_below);
    results.push_back(levels.Finish());
    TranslationCostModel& t = c.transform.translation;
    Group translation(transform.Child("translation"), "transform.translation");
    translation.Read("latency_base_min_ms", t.latency_base_min_ms);
    translation.Read("latency_base_max_ms", t.latency_base_max_ms);
    translation.Read("latency_per_char_ms", t.latency_per_char_ms);
    translation.Read("cost_base_min", t.cost_base_min);
    translation.Read("cost_base_max", t.cost_base_max);
    translation.Read("cost_per_char", t.cost_per_char);
    results.push_back(translation.Finish());
  }
  transform.Read("tamper_rate", c.transform.tamper_rate);
  results.push_back(transform.Finish());

  Group remote(j, "remote");
  root.Child("remote");
  remote.Read("latency_min_ms", c.remote.latency_min_ms);
  remote.Read("latency_max_ms", c.remote.latency_max_ms);
  remote.Read("cost_min", c.remote.cost_min);
  remote.Read("cost_max", c.remote.cost_max);
  {
    Group modifiers(remote.Child("modifiers"), "remote.modifiers");
    modifiers.ReadRange("high", c.remote.high);
    modifiers.ReadRange("moderate", c.remote.moderate);
    modifiers.ReadRange("light", c.remote.light);
    modifiers.ReadRange("none", c.remote.none);
    results.push_back(modifiers.Finish());
  }
  results.push_back(remote.Finish());

  Group local(j, "local");
  root.Child("local");
  local.Read("latency_min_ms", c.local.latency_min_ms);
  local.Read("latency_max_ms", c.local.latency_max_ms);
  local.Read("cost_units", c.local.cost_units);
  results.push_back(local.Finish());

  Group accounting(j, "accounting");
  root.Child("accounting");
  accounting.Read("delta_star", c.accounting.delta_star);
  accounting.Read("delta_ent", c.accounting.delta_ent);
  accounting.Read("alpha_grid", c.accounting.alpha_grid);
  results.push_back(accounting.Finish());

  Group sim(j, "sim");
  root.Child("sim");
  sim.Read("n_users", c.sim.n_users);
  sim.Read("n_queries_per_user", c.sim.n_queries_per_user);
  sim.Read("n_trials", c.sim.n_trials);
  sim.Read("master_seed", c.sim.master_seed);
  sim.Read("epsilon_max_min", c.sim.epsilon_max_min);
  sim.Read("epsilon_max_max", c.sim.epsilon_max_max);
  sim.Read("threads", c.sim.threads);
  sim.Read("base_epoch", c.sim.base_epoch);
  results.push_back(sim.Finish());

  Group stats(j, "stats");
  root.Child("stats");
  stats.Read("bootstrap_resamples", c.stats.bootstrap_resamples);
  stats.Read("ci_level", c.stats.ci_level);
  results.push_back(stats.Finish());

  results.push_back(root.Finish());
  for (const absl::Status& s : results) {
    if (!s.ok()) return s;
  }
  if (absl::Status s = c.Validate(); !s.ok()) return s;
  return c;
}

absl::StatusOr<Config> ParseConfig(std::string_view text, Config base) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError("config is not valid JSON");
  }
  return ConfigFromJson(j, std::move(base));
}

absl::StatusOr<Config> LoadConfigFile(const std::string& path, Config base) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot read config ", path));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str(), std::move(base));
}

}  // namespace avec
