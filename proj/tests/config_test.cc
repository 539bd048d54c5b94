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

#include <fstream>
#include <limits>
#include <sstream>

#include "gtest/gtest.h"

namespace avec {
namespace {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(ConfigTest, ShippedFileEqualsDefaults) {
  const Config loaded = *LoadConfigFile(AVEC_DATA_DIR "/default_config.json");
  EXPECT_EQ(ConfigToJson(loaded), ConfigToJson(Config{}));
  EXPECT_EQ(ConfigToJson(Config{}).dump(2) + "\n",
            ReadFile(AVEC_DATA_DIR "/default_config.json"));
}

TEST(ConfigTest, RoundTrip) {
  Config c;
  c.sim.n_users = 7;
  c.sim.master_seed = 99;
  c.gating.epsilon_gate = std::numeric_limits<double>::infinity();
  c.budgeting.domain_weights["pets"] = 0.3;
  c.transform.patterns.push_back({EntityCategory::kIdentifier, R"(\bX\d+\b)"});
  const Config back = *ConfigFromJson(ConfigToJson(c));
  EXPECT_EQ(ConfigToJson(back), ConfigToJson(c));
  EXPECT_TRUE(std::isinf(back.gating.epsilon_gate));
}

TEST(ConfigTest, PartialOverride) {
  const Config c = *ParseConfig(R"({"sim": {"n_trials": 5}, "gating": {"epsilon_gate": 1.5}})");
  EXPECT_EQ(c.sim.n_trials, 5);
  EXPECT_EQ(c.sim.n_users, 100);
  EXPECT_EQ(c.gating.epsilon_gate, 1.5);
}

TEST(ConfigTest, Errors) {
  EXPECT_FALSE(ParseConfig("{not json").ok());
  EXPECT_FALSE(ParseConfig(R"({"sim": {"n_userz": 5}})").ok());
  EXPECT_FALSE(ParseConfig(R"({"bogus": {}})").ok());
  EXPECT_FALSE(ParseConfig(R"({"sim": {"n_users": "many"}})").ok());
  EXPECT_FALSE(ParseConfig(R"({"budgeting": {"kappa": 0}})").ok());
  EXPECT_FALSE(ParseConfig(R"({"schema_version": 99})").ok());
  EXPECT_FALSE(ParseConfig(R"({"transform": {"patterns": [{"category": "Name", "regex": "("}]}})").ok());
  EXPECT_FALSE(LoadConfigFile("/nonexistent/config.json").ok());
}

TEST(ConfigTest, DefaultsMatchDocumentedConstants) {
  const Config c;
  EXPECT_EQ(c.budgeting.epsilon_base_high, 0.05);
  EXPECT_EQ(c.budgeting.epsilon_base_medium, 0.10);
  EXPECT_EQ(c.budgeting.confidence_threshold, 0.8);
  EXPECT_EQ(c.budgeting.kappa, 5.0);
  EXPECT_EQ(c.budgeting.delta_f, 0.3);
  EXPECT_EQ(c.budgeting.epsilon_eta, 0.01);
  EXPECT_EQ(c.sim.n_users, 100);
  EXPECT_EQ(c.sim.n_queries_per_user, 10);
  EXPECT_EQ(c.sim.n_trials, 30);
  EXPECT_EQ(c.sim.master_seed, 1729u);
  EXPECT_EQ(c.accounting.delta_star, 1e-5);
  EXPECT_EQ(c.stats.bootstrap_resamples, 1000);
  EXPECT_EQ(c.transform.vocab_min, 8u);
  EXPECT_EQ(c.transform.vocab_max, 64u);
  EXPECT_EQ(c.remote.latency_min_ms, 300.0);
  EXPECT_EQ(c.remote.cost_max, 0.015);
}

}  // namespace
}  // namespace avec
