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

#ifndef AVEC_STATS_H_
#define AVEC_STATS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "avec/random.h"

namespace avec::stats {

enum class Method {
  kAnova,
  kKruskalWallis,
  kWelchT,
  kWilcoxonSignedRank,
  kChiSquared,
  kMannWhitney,
};

std::string_view MethodName(Method method);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::optional<double> effect_size;
  Method method = Method::kAnova;
  double df = 0.0;
};

using Sample = std::span<const double>;
// Row-major contingency table.
using Table = std::vector<std::vector<double>>;

double Mean(Sample x);
// Unbiased (n - 1) variance.
double Variance(Sample x);

// Average ranks (1-based) with ties sharing the mean rank.
std::vector<double> AverageRanks(Sample x);
// Sum over tie groups of t^3 - t.
double TieSum(Sample x);

// One-way ANOVA. Effect size is eta squared. All-equal data gives F = 0,
// p = 1; zero within-group variance with distinct means gives F = +inf, p = 0.
absl::StatusOr<TestResult> AnovaF(std::span<const std::vector<double>> groups);

// H with tie correction; p from the chi-squared(g - 1) tail.
absl::StatusOr<TestResult> KruskalWallis(
    std::span<const std::vector<double>> groups);

// Welch's unequal-variance t test, two-sided. Effect size is Cohen's d when
// the pooled variance is nonzero.
absl::StatusOr<TestResult> WelchTTest(Sample a, Sample b);

// Paired signed-rank test on a - b. Zero differences are dropped; the
// statistic is min(T+, T-); normal approximation with tie and continuity
// corrections. All differences zero gives statistic 0, p = 1.
absl::StatusOr<TestResult> WilcoxonSignedRank(Sample a, Sample b);

// Pearson chi-squared test of independence without continuity correction.
// Effect size is Cramer's V.
absl::StatusOr<TestResult> ChiSquared(const Table& table);

// Two-sided Mann-Whitney U. The statistic is U of the first sample; p uses
// the normal approximation with tie and continuity corrections.
absl::StatusOr<TestResult> MannWhitney(Sample a, Sample b);

// (mean(a) - mean(b)) / pooled SD. Error on zero pooled variance.
absl::StatusOr<double> CohensD(Sample a, Sample b);

// sqrt(chi2 / (N (min(r, c) - 1))).
absl::StatusOr<double> CramersV(const Table& table);

// Percentile bootstrap interval with linear interpolation between order
// statistics. Resample indices are floor(u * n) from `rng`.
absl::StatusOr<std::pair<double, double>> BootstrapCi(
    Sample sample, const std::function<double(Sample)>& statistic,
    int n_resamples, double level, RandomStream& rng);

// min(1, p * family_size) elementwise.
absl::StatusOr<std::vector<double>> Bonferroni(std::span<const double> p_values,
                                               int family_size);

}  // namespace avec::stats

#endif  // AVEC_STATS_H_
