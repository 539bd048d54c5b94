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
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "avec/special_functions.h"

namespace avec::stats {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr size_t kMinRankSample = 5;

double Sign(double x) { return (x > 0.0) - (x < 0.0); }

double TwoSidedNormalP(double z) {
  return std::min(1.0, 2.0 * NormalSf(std::abs(z)));
}

absl::Status CheckFinite(Sample x) {
  for (double v : x) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("samples must be finite");
    }
  }
  return absl::OkStatus();
}

absl::Status CheckGroups(std::span<const std::vector<double>> groups,
                         size_t min_size) {
  if (groups.size() < 2) {
    return absl::InvalidArgumentError("need at least two groups");
  }
  for (const std::vector<double>& g : groups) {
    if (g.size() < min_size) {
      return absl::InvalidArgumentError(
          absl::StrCat("each group needs at least ", min_size, " values"));
    }
    if (absl::Status s = CheckFinite(g); !s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::StatusOr<double> ChiSquaredStatistic(const Table& table, double* total,
                                           size_t* rows, size_t* cols) {
  const size_t r = table.size();
  if (r < 2 || table[0].size() < 2) {
    return absl::InvalidArgumentError("table must be at least 2x2");
  }
  const size_t c = table[0].size();
  std::vector<double> row_sum(r, 0.0), col_sum(c, 0.0);
  double n = 0.0;
  for (size_t i = 0; i < r; ++i) {
    if (table[i].size() != c) {
      return absl::InvalidArgumentError("ragged contingency table");
    }
    for (size_t j = 0; j < c; ++j) {
      const double v = table[i][j];
      if (!(v >= 0.0) || !std::isfinite(v)) {
        return absl::InvalidArgumentError("counts must be finite and >= 0");
      }
      row_sum[i] += v;
      col_sum[j] += v;
      n += v;
    }
  }
  for (double s : row_sum) {
    if (s == 0.0) return absl::InvalidArgumentError("empty table row");
  }
  for (double s : col_sum) {
    if (s == 0.0) return absl::InvalidArgumentError("empty table column");
  }
  double chi2 = 0.0;
  for (size_t i = 0; i < r; ++i) {
    for (size_t j = 0; j < c; ++j) {
      const double expected = row_sum[i] * col_sum[j] / n;
      const double diff = table[i][j] - expected;
      chi2 += diff * diff / expected;
    }
  }
  *total = n;
  *rows = r;
  *cols = c;
  return chi2;
}

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kAnova:
      return "anova_f";
    case Method::kKruskalWallis:
      return "kruskal_wallis";
    case Method::kWelchT:
      return "welch_t";
    case Method::kWilcoxonSignedRank:
      return "wilcoxon_signed_rank";
    case Method::kChiSquared:
      return "chi_squared";
    case Method::kMannWhitney:
      return "mann_whitney";
  }
  return "?";
}

double Mean(Sample x) {
  if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(x.begin(), x.end(), 0.0) /
         static_cast<double>(x.size());
}

double Variance(Sample x) {
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = Mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

std::vector<double> AverageRanks(Sample x) {
  const size_t n = x.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  for (size_t i = 0; i < n;) {
    size_t j = i + 1;
    while (j < n && x[order[j]] == x[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j + 1);
    for (size_t t = i; t < j; ++t) ranks[order[t]] = rank;
    i = j;
  }
  return ranks;
}

double TieSum(Sample x) {
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (size_t i = 0; i < sorted.size();) {
    size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    sum += t * t * t - t;
    i = j;
  }
  return sum;
}

absl::StatusOr<TestResult> AnovaF(std::span<const std::vector<double>> groups) {
  if (absl::Status s = CheckGroups(groups, 2); !s.ok()) return s;
  double total = 0.0;
  size_t n = 0;
  for (const std::vector<double>& g : groups) {
    total += std::accumulate(g.begin(), g.end(), 0.0);
    n += g.size();
  }
  const double grand = total / static_cast<double>(n);
  double ssb = 0.0, ssw = 0.0;
  for (const std::vector<double>& g : groups) {
    const double m = Mean(g);
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) ssw += (v - m) * (v - m);
  }
  const double df1 = static_cast<double>(groups.size() - 1);
  const double df2 = static_cast<double>(n - groups.size());

  TestResult r;
  r.method = Method::kAnova;
  r.df = df1;
  if (ssw == 0.0) {
    r.statistic = ssb == 0.0 ? 0.0 : kInf;
    r.p_value = ssb == 0.0 ? 1.0 : 0.0;
  } else {
    r.statistic = (ssb / df1) / (ssw / df2);
    r.p_value = FSf(r.statistic, df1, df2);
  }
  r.effect_size = ssb + ssw > 0.0 ? ssb / (ssb + ssw) : 0.0;
  return r;
}

absl::StatusOr<TestResult> KruskalWallis(
    std::span<const std::vector<double>> groups) {
  if (absl::Status s = CheckGroups(groups, kMinRankSample); !s.ok()) return s;
  std::vector<double> pooled;
  for (const std::vector<double>& g : groups) {
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  const std::vector<double> ranks = AverageRanks(pooled);
  const double n = static_cast<double>(pooled.size());
  double h = 0.0;
  size_t offset = 0;
  for (const std::vector<double>& g : groups) {
    double rank_sum = 0.0;
    for (size_t i = 0; i < g.size(); ++i) rank_sum += ranks[offset + i];
    offset += g.size();
    h += rank_sum * rank_sum / static_cast<double>(g.size());
  }
  h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);
  const double correction = 1.0 - TieSum(pooled) / (n * n * n - n);

  TestResult r;
  r.method = Method::kKruskalWallis;
  r.df = static_cast<double>(groups.size() - 1);
  if (correction == 0.0) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  r.statistic = h / correction;
  r.p_value = ChiSquaredSf(r.statistic, r.df);
  return r;
}

absl::StatusOr<TestResult> WelchTTest(Sample a, Sample b) {
  if (a.size() < 2 || b.size() < 2) {
    return absl::InvalidArgumentError("each sample needs at least 2 values");
  }
  if (absl::Status s = CheckFinite(a); !s.ok()) return s;
  if (absl::Status s = CheckFinite(b); !s.ok()) return s;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = Mean(a), mb = Mean(b);
  const double va = Variance(a) / na, vb = Variance(b) / nb;
  const double se2 = va + vb;

  TestResult r;
  r.method = Method::kWelchT;
  if (se2 == 0.0) {
    r.df = na + nb - 2.0;
    r.statistic = ma == mb ? 0.0 : Sign(ma - mb) * kInf;
    r.p_value = ma == mb ? 1.0 : 0.0;
  } else {
    r.df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    r.statistic = (ma - mb) / std::sqrt(se2);
    r.p_value = StudentTTwoSided(r.statistic, r.df);
  }
  if (absl::StatusOr<double> d = CohensD(a, b); d.ok()) r.effect_size = *d;
  return r;
}

absl::StatusOr<TestResult> WilcoxonSignedRank(Sample a, Sample b) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError("paired samples differ in length");
  }
  if (a.size() < kMinRankSample) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least ", kMinRankSample, " pairs"));
  }
  if (absl::Status s = CheckFinite(a); !s.ok()) return s;
  if (absl::Status s = CheckFinite(b); !s.ok()) return s;
  std::vector<double> diff, magnitude;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) {
      diff.push_back(d);
      magnitude.push_back(std::abs(d));
    }
  }
  TestResult r;
  r.method = Method::kWilcoxonSignedRank;
  if (diff.empty()) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  const std::vector<double> ranks = AverageRanks(magnitude);
  const double n = static_cast<double>(diff.size());
  double r_plus = 0.0;
  for (size_t i = 0; i < diff.size(); ++i) {
    if (diff[i] > 0.0) r_plus += ranks[i];
  }
  const double r_minus = n * (n + 1.0) / 2.0 - r_plus;
  const double mean = n * (n + 1.0) / 4.0;
  const double var =
      n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - TieSum(magnitude) / 48.0;
  const double se = std::sqrt(var);
  double z = (r_plus - mean) / se;
  z -= Sign(z) * 0.5 / se;
  r.statistic = std::min(r_plus, r_minus);
  r.p_value = TwoSidedNormalP(z);
  return r;
}

absl::StatusOr<TestResult> ChiSquared(const Table& table) {
  double n = 0.0;
  size_t rows = 0, cols = 0;
  absl::StatusOr<double> chi2 = ChiSquaredStatistic(table, &n, &rows, &cols);
  if (!chi2.ok()) return chi2.status();
  TestResult r;
  r.method = Method::kChiSquared;
  r.statistic = *chi2;
  r.df = static_cast<double>((rows - 1) * (cols - 1));
  r.p_value = ChiSquaredSf(r.statistic, r.df);
  r.effect_size = std::sqrt(
      *chi2 / (n * static_cast<double>(std::min(rows, cols) - 1)));
  return r;
}

absl::StatusOr<TestResult> MannWhitney(Sample a, Sample b) {
  if (a.size() < kMinRankSample || b.size() < kMinRankSample) {
    return absl::InvalidArgumentError(
        absl::StrCat("each sample needs at least ", kMinRankSample,
                     " values"));
  }
  if (absl::Status s = CheckFinite(a); !s.ok()) return s;
  if (absl::Status s = CheckFinite(b); !s.ok()) return s;
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::vector<double> ranks = AverageRanks(pooled);
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  double r1 = 0.0;
  for (size_t i = 0; i < a.size(); ++i) r1 += ranks[i];
  const double u1 = r1 - n1 * (n1 + 1.0) / 2.0;
  const double u = std::max(u1, n1 * n2 - u1);
  const double mu = n1 * n2 / 2.0;
  const double s = std::sqrt(n1 * n2 / 12.0 *
                             ((n + 1.0) - TieSum(pooled) / (n * (n - 1.0))));
  TestResult r;
  r.method = Method::kMannWhitney;
  r.statistic = u1;
  r.p_value = s > 0.0 ? std::clamp(2.0 * NormalSf((u - mu - 0.5) / s), 0.0, 1.0)
                      : 1.0;
  return r;
}

absl::StatusOr<double> CohensD(Sample a, Sample b) {
  if (a.size() < 2 || b.size() < 2) {
    return absl::InvalidArgumentError("each sample needs at least 2 values");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double pooled =
      ((na - 1.0) * Variance(a) + (nb - 1.0) * Variance(b)) / (na + nb - 2.0);
  if (!(pooled > 0.0)) {
    return absl::InvalidArgumentError("zero pooled variance");
  }
  return (Mean(a) - Mean(b)) / std::sqrt(pooled);
}

absl::StatusOr<double> CramersV(const Table& table) {
  double n = 0.0;
  size_t rows = 0, cols = 0;
  absl::StatusOr<double> chi2 = ChiSquaredStatistic(table, &n, &rows, &cols);
  if (!chi2.ok()) return chi2.status();
  return std::sqrt(*chi2 /
                   (n * static_cast<double>(std::min(rows, cols) - 1)));
}

absl::StatusOr<std::pair<double, double>> BootstrapCi(
    Sample sample, const std::function<double(Sample)>& statistic,
    int n_resamples, double level, RandomStream& rng) {
  if (sample.size() < 2) {
    return absl::InvalidArgumentError("bootstrap needs at least 2 values");
  }
  if (n_resamples < 1) {
    return absl::InvalidArgumentError("n_resamples must be >= 1");
  }
  if (!(level > 0.0 && level < 1.0)) {
    return absl::InvalidArgumentError("level must be in (0, 1)");
  }
  const size_t n = sample.size();
  std::vector<double> resample(n), u(n), values;
  values.reserve(static_cast<size_t>(n_resamples));
  for (int i = 0; i < n_resamples; ++i) {
    rng.FillUniform(u);
    for (size_t j = 0; j < n; ++j) {
      const size_t idx = std::min(
          static_cast<size_t>(u[j] * static_cast<double>(n)), n - 1);
      resample[j] = sample[idx];
    }
    values.push_back(statistic(resample));
  }
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const size_t lo = static_cast<size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - static_cast<double>(lo)) *
                            (values[lo + 1] - values[lo]);
  };
  return std::make_pair(quantile((1.0 - level) / 2.0),
                        quantile((1.0 + level) / 2.0));
}

absl::StatusOr<std::vector<double>> Bonferroni(std::span<const double> p_values,
                                               int family_size) {
  if (family_size < 1) {
    return absl::InvalidArgumentError("family_size must be >= 1");
  }
  std::vector<double> out;
  out.reserve(p_values.size());
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      return absl::InvalidArgumentError("p-values must lie in [0, 1]");
    }
    out.push_back(std::min(1.0, p * family_size));
  }
  return out;
}

}  // namespace avec::stats
