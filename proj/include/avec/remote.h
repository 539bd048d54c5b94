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

#ifndef AVEC_REMOTE_H_
#define AVEC_REMOTE_H_

#include <string_view>

#include "avec/random.h"
#include "avec/transform.h"

namespace avec {

enum class QualityLabel {
  kLocalHighConfidence,
  kLocalFallback,  // delegation aborted (failed verification)
  kRemoteHigh,
  kRemoteModerate,
  kRemoteLight,
  kRemoteUnmodified,
};

std::string_view QualityLabelName(QualityLabel label);
QualityLabel RemoteLabelFor(PrivatizationLevel level);

struct ResponseRecord {
  QualityLabel quality_label = QualityLabel::kRemoteUnmodified;
  double latency_ms = 0.0;
  double cost_units = 0.0;
};

struct ModifierRange {
  double lo;
  double hi;
};

struct RemoteCostModel {
  double latency_min_ms = 300.0;
  double latency_max_ms = 800.0;
  double cost_min = 0.007;
  double cost_max = 0.015;
  ModifierRange high = {0.4, 0.6};
  ModifierRange moderate = {0.7, 0.9};
  ModifierRange light = {0.9, 1.1};
  ModifierRange none = {0.95, 1.05};

  const ModifierRange& For(PrivatizationLevel level) const;
};

// Simulated remote model. Reads only the privatization level: it never sees
// original text and charges nothing to any odometer. Three draws: latency
// base, cost base, modifier; one modifier scales both.
ResponseRecord RemoteRespond(const TransformedQuery& query, RandomStream& rng,
                             const RemoteCostModel& model = {});
ResponseRecord RemoteRespond(PrivatizationLevel level, RandomStream& rng,
                             const RemoteCostModel& model = {});

// On-device answer.
struct LocalCostModel {
  double latency_min_ms = 50.0;
  double latency_max_ms = 150.0;
  double cost_units = 0.0;
};

// One draw (latency).
ResponseRecord LocalRespond(QualityLabel label, RandomStream& rng,
                            const LocalCostModel& model = {});

}  // namespace avec

#endif  // AVEC_REMOTE_H_
