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

#include "avec/stats.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <vector>

#include "avec/random.h"
#include "avec/special_functions.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "stats_oracle.h"

namespace avec::stats {
namespace {

using Vec = std::vector<double>;
using testing::OracleChi2;
using testing::OracleF;
using testing::OracleH;
using testing::OracleU;
using testing::OracleWilcoxonT;

const nlohmann::json& Fixtures() { return testing::StatsFixtures(); }

void ExpectClose(double actual, double expected, double tol, const std::string& what) {
  EXPECT_NEAR(actual, expected, tol * std::max(1.0, std::fabs(expected))) << what;
}

TEST(FixtureTest, MatchesScipyAndBruteForce) {
  for (const auto& c : Fixtures()["cases"]) {
    const Vec a = c["a"], b = c["b"], cc = c["c"];
    const std::string name = c["name"];
    const std::vector<Vec> groups = {a, b, cc};

    const TestResult f = *AnovaF(groups);
    ExpectClose(f.statistic, c["anova_f"]["statistic"], 1e-9, name + " F");
    ExpectClose(f.statistic, OracleF(groups), 1e-9, name + " F oracle");
    ExpectClose(f.p_value, c["anova_f"]["p_value"], 1e-9, name + " F p");

    const TestResult h = *KruskalWallis(groups);
    ExpectClose(h.statistic, c["kruskal_wallis"]["statistic"], 1e-9, name + " H");
    ExpectClose(h.statistic, OracleH(groups), 1e-9, name + " H oracle");
    ExpectClose(h.p_value, c["kruskal_wallis"]["p_value"], 1e-9, name + " H p");

    const TestResult t = *WelchTTest(a, b);
    ExpectClose(t.statistic, c["welch_t"]["statistic"], 1e-9, name + " t");
    ExpectClose(t.p_value, c["welch_t"]["p_value"], 1e-9, name + " t p");
    ExpectClose(*t.effect_size, c["welch_t"]["effect_size"], 1e-9, name + " d");

    const TestResult u = *MannWhitney(a, b);
    ExpectClose(u.statistic, c["mann_whitney"]["statistic"], 1e-9, name + " U");
    ExpectClose(u.statistic, OracleU(a, b), 1e-9, name + " U oracle");
    ExpectClose(u.p_value, c["mann_whitney"]["p_value"], 1e-9, name + " U p");

    const TestResult w = *WilcoxonSignedRank(a, b);
    ExpectClose(w.statistic, c["wilcoxon_signed_rank"]["statistic"], 1e-9, name + " W");
    ExpectClose(w.statistic, OracleWilcoxonT(a, b), 1e-9, name + " W oracle");
    ExpectClose(w.p_value, c["wilcoxon_signed_rank"]["p_value"], 1e-9, name + " W p");

    ExpectClose(*CohensD(a, b), c["cohens_d"], 1e-9, name + " cohens_d");
  }
}

TEST(FixtureTest, ChiSquaredTables) {
  for (const auto& c : Fixtures()["tables"]) {
    const Table t = c["table"];
    const TestResult r = *ChiSquared(t);
    ExpectClose(r.statistic, c["statistic"], 1e-9, "chi2");
    ExpectClose(r.statistic, OracleChi2(t), 1e-9, "chi2 oracle");
    ExpectClose(r.p_value, c["p_value"], 1e-9, "chi2 p");
    EXPECT_EQ(r.df, c["df"].get<double>());
    ExpectClose(*CramersV(t), c["cramers_v"], 1e-9, "V");
  }
}

TEST(SpecialFunctionTest, SpotPoints) {
  const auto& s = Fixtures()["special"];
  for (const auto& p : s["incomplete_beta"]) {
    EXPECT_NEAR(RegularizedIncompleteBeta(p[0], p[1], p[2]), p[3].get<double>(), 1e-10) << p;
  }
  for (const auto& p : s["gamma_p"]) {
    EXPECT_NEAR(RegularizedGammaP(p[0], p[1]), p[2].get<double>(), 1e-10) << p;
  }
  for (const auto& p : s["gamma_q"]) {
    EXPECT_NEAR(RegularizedGammaQ(p[0], p[1]), p[2].get<double>(), 1e-10) << p;
  }
  for (const auto& p : s["normal_cdf"]) {
    EXPECT_NEAR(NormalCdf(p[0]), p[1].get<double>(), 1e-10) << p;
    EXPECT_NEAR(NormalSf(p[0]), 1 - p[1].get<double>(), 1e-10) << p;
  }
  for (const auto& p : s["chi_squared_sf"]) {
    EXPECT_NEAR(ChiSquaredSf(p[0], p[1]), p[2].get<double>(), 1e-10) << p;
  }
  for (const auto& p : s["f_sf"]) {
    EXPECT_NEAR(FSf(p[0], p[1], p[2]), p[3].get<double>(), 1e-10) << p;
  }
  for (const auto& p : s["student_t_two_sided"]) {
    EXPECT_NEAR(StudentTTwoSided(p[0], p[1]), p[2].get<double>(), 1e-10) << p;
  }
}

TEST(AnovaTest, HandExample) {
  const std::vector<Vec> g = {{1, 2, 3}, {2, 3, 4}};
  const TestResult r = *AnovaF(g);
  EXPECT_NEAR(r.statistic, 1.5, 1e-12);
  EXPECT_NEAR(r.p_value, FSf(1.5, 1, 4), 1e-15);
}

TEST(AnovaTest, DegenerateAndShiftInvariant) {
  const std::vector<Vec> same = {{2, 2, 2}, {2, 2}};
  const TestResult r = *AnovaF(same);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  const std::vector<Vec> g = {{1, 5, 3}, {2, 3, 9}, {0, 1, 1}};
  std::vector<Vec> shifted = g;
  for (Vec& v : shifted) {
    for (double& x : v) x += 10;
  }
  EXPECT_NEAR(AnovaF(g)->statistic, AnovaF(shifted)->statistic, 1e-10);
  EXPECT_FALSE(AnovaF(std::vector<Vec>{{1, 2}}).ok());
  EXPECT_FALSE(AnovaF(std::vector<Vec>{{1, 2}, {3}}).ok());
}

TEST(WelchTest, IdenticalSamples) {
  const Vec a = {1, 2, 3, 4, 5};
  const TestResult r = *WelchTTest(a, a);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_NEAR(r.p_value, 1.0, 1e-15);
}

TEST(ChiSquaredTest, IndependentTable) {
  const Table t = {{50, 50}, {50, 50}};
  EXPECT_EQ(ChiSquared(t)->statistic, 0.0);
  EXPECT_EQ(*CramersV(t), 0.0);
  EXPECT_NEAR(*CramersV({{40, 0}, {0, 60}}), 1.0, 1e-15);
  EXPECT_FALSE(ChiSquared({{0, 0}, {1, 2}}).ok());
}

TEST(WilcoxonTest, AllZeroDifferences) {
  const Vec a = {1, 2, 3, 4, 5, 6};
  const TestResult r = *WilcoxonSignedRank(a, a);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.statistic, 0.0);
}

TEST(RankTest, InvariantUnderMonotoneTransform) {
  const auto& c = Fixtures()["cases"][0];
  Vec a = c["a"], b = c["b"], cc = c["c"];
  auto f = [](Vec v) {
    for (double& x : v) x = std::exp(x / 4) + 3;
    return v;
  };
  const std::vector<Vec> g = {a, b, cc}, gt = {f(a), f(b), f(cc)};
  EXPECT_NEAR(KruskalWallis(g)->statistic, KruskalWallis(gt)->statistic, 1e-12);
  EXPECT_NEAR(MannWhitney(a, b)->p_value, MannWhitney(f(a), f(b))->p_value, 1e-12);
  EXPECT_FALSE(MannWhitney(Vec{1, 2, 3, 4}, b).ok());
}

TEST(CohensDTest, KnownValues) {
  const Vec a = {1, 2, 3, 4, 5};
  EXPECT_EQ(*CohensD(a, a), 0.0);
  // Both samples have SD sqrt(2.5); shifting by one SD gives d = 1.
  Vec b = a;
  for (double& x : b) x -= std::sqrt(2.5);
  EXPECT_NEAR(*CohensD(a, b), 1.0, 1e-12);
  EXPECT_FALSE(CohensD(Vec{1, 1}, Vec{2, 2}).ok());
}

TEST(BootstrapTest, ConstantSample) {
  RandomStream rng(1, 0, 0);
  const Vec x(20, 3.5);
  const auto ci = *BootstrapCi(x, Mean, 1000, 0.95, rng);
  EXPECT_EQ(ci.first, 3.5);
  EXPECT_EQ(ci.second, 3.5);
}

TEST(BootstrapTest, ContainsSampleMeanAndDeterministic) {
  RandomStream gen(2, 0, 0);
  Vec x(1000);
  for (double& v : x) v = gen.Uniform();
  RandomStream r1(3, 0, 0), r2(3, 0, 0);
  const auto a = *BootstrapCi(x, Mean, 1000, 0.95, r1);
  const auto b = *BootstrapCi(x, Mean, 1000, 0.95, r2);
  EXPECT_LE(a.first, Mean(x));
  EXPECT_GE(a.second, Mean(x));
  EXPECT_EQ(a, b);
}

TEST(BootstrapTest, Coverage) {
  RandomStream gen(4, 0, 0), boot(5, 0, 0);
  int covered = 0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) {
    Vec x(50);
    for (double& v : x) v = gen.Uniform();
    const auto ci = *BootstrapCi(x, Mean, 1000, 0.95, boot);
    covered += ci.first <= 0.5 && 0.5 <= ci.second;
  }
  EXPECT_GE(covered, 930);
}

TEST(BonferroniTest, Values) {
  const Vec p = {0.01, 0.5, 0.2};
  const Vec adj = *Bonferroni(p, 5);
  EXPECT_NEAR(adj[0], 0.05, 1e-15);
  EXPECT_EQ(adj[1], 1.0);
  EXPECT_EQ(*Bonferroni(p, 1), p);
  EXPECT_FALSE(Bonferroni(p, 0).ok());
}

TEST(PValueRangeTest, AllInUnitInterval) {
  RandomStream gen(6, 0, 0);
  for (int r = 0; r < 50; ++r) {
    Vec a(12), b(12);
    for (double& v : a) v = std::round(gen.Uniform() * 5);
    for (double& v : b) v = std::round(gen.Uniform() * 5);
    for (const auto& res : {WelchTTest(a, b), MannWhitney(a, b), WilcoxonSignedRank(a, b),
                            AnovaF(std::vector<Vec>{a, b}),
                            KruskalWallis(std::vector<Vec>{a, b})}) {
      if (!res.ok()) continue;
      EXPECT_GE(res->p_value, 0.0);
      EXPECT_LE(res->p_value, 1.0);
    }
  }
}

}  // namespace
}  // namespace avec::stats
