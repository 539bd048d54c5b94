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

#ifndef AVEC_TESTS_STATS_ORACLE_H_
#define AVEC_TESTS_STATS_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <vector>

#include "avec/stats.h"
#include "json.hpp"

namespace avec::testing {

using Vec = std::vector<double>;
using stats::Table;

inline const nlohmann::json& StatsFixtures() {
  static const nlohmann::json* const j = [] {
    std::ifstream in(AVEC_FIXTURE_DIR "/stats_reference.json");
    return new nlohmann::json(nlohmann::json::parse(in));
  }();
  return *j;
}

// Brute-force oracles straight from the textbook definitions.

inline double OracleRank(const Vec& all, double x) {
  double less = 0, equal = 0;
  for (double y : all) {
    less += y < x;
    equal += y == x;
  }
  return less + (equal + 1) / 2;
}

inline double OracleF(const std::vector<Vec>& groups) {
  Vec all;
  for (const Vec& g : groups) all.insert(all.end(), g.begin(), g.end());
  const double grand = std::accumulate(all.begin(), all.end(), 0.0) / all.size();
  double ssb = 0, ssw = 0;
  for (const Vec& g : groups) {
    const double m = std::accumulate(g.begin(), g.end(), 0.0) / g.size();
    ssb += g.size() * (m - grand) * (m - grand);
    for (double x : g) ssw += (x - m) * (x - m);
  }
  const double k = groups.size(), n = all.size();
  return (ssb / (k - 1)) / (ssw / (n - k));
}

inline double OracleU(const Vec& a, const Vec& b) {
  double u = 0;
  for (double x : a) {
    for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
  }
  return u;
}

inline double OracleWilcoxonT(const Vec& a, const Vec& b) {
  Vec d, absd;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) {
      d.push_back(a[i] - b[i]);
      absd.push_back(std::fabs(a[i] - b[i]));
    }
  }
  double plus = 0, minus = 0;
  for (size_t i = 0; i < d.size(); ++i) {
    (d[i] > 0 ? plus : minus) += OracleRank(absd, absd[i]);
  }
  return std::min(plus, minus);
}

inline double OracleH(const std::vector<Vec>& groups) {
  Vec all;
  for (const Vec& g : groups) all.insert(all.end(), g.begin(), g.end());
  const double n = all.size();
  double h = 0;
  for (const Vec& g : groups) {
    double r = 0;
    for (double x : g) r += OracleRank(all, x);
    h += r * r / g.size();
  }
  h = 12 / (n * (n + 1)) * h - 3 * (n + 1);
  Vec sorted = all;
  std::sort(sorted.begin(), sorted.end());
  double ties = 0;
  for (size_t i = 0; i < sorted.size();) {
    size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = j - i;
    ties += t * t * t - t;
    i = j;
  }
  return h / (1 - ties / (n * n * n - n));
}

inline double OracleChi2(const Table& t) {
  double n = 0;
  Vec rows(t.size()), cols(t[0].size());
  for (size_t i = 0; i < t.size(); ++i) {
    for (size_t j = 0; j < t[i].size(); ++j) {
      rows[i] += t[i][j];
      cols[j] += t[i][j];
      n += t[i][j];
    }
  }
  double chi = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    for (size_t j = 0; j < t[i].size(); ++j) {
      const double e = rows[i] * cols[j] / n;
      chi += (t[i][j] - e) * (t[i][j] - e) / e;
    }
  }
  return chi;
}

}  // namespace avec::testing

#endif  // AVEC_TESTS_STATS_ORACLE_H_
