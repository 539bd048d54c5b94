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

#include "avec/remote.h"

namespace avec {

std::string_view QualityLabelName(QualityLabel label) {
  switch (label) {
    case QualityLabel::kLocalHighConfidence:
      return "LocalHighConfidence";
    case QualityLabel::kLocalFallback:
      return "LocalFallback";
    case QualityLabel::kRemoteHigh:
      return "RemoteHigh";
    case QualityLabel::kRemoteModerate:
      return "RemoteModerate";
    case QualityLabel::kRemoteLight:
      return "RemoteLight";
    case QualityLabel::kRemoteUnmodified:
      return "RemoteUnmodified";
  }
  return "?";
}

QualityLabel RemoteLabelFor(PrivatizationLevel level) {
  switch (level) {
    case PrivatizationLevel::kHigh:
      return QualityLabel::kRemoteHigh;
    case PrivatizationLevel::kModerate:
      return QualityLabel::kRemoteModerate;
    case PrivatizationLevel::kLight:
      return QualityLabel::kRemoteLight;
    case PrivatizationLevel::kNone:
      return QualityLabel::kRemoteUnmodified;
  }
  return QualityLabel::kRemoteUnmodified;
}

const ModifierRange& RemoteCostModel::For(PrivatizationLevel level) const {
  switch (level) {
    case PrivatizationLevel::kHigh:
      return high;
    case PrivatizationLevel::kModerate:
      return moderate;
    case PrivatizationLevel::kLight:
      return light;
    case PrivatizationLevel::kNone:
      return none;
  }
  return none;
}

ResponseRecord RemoteRespond(PrivatizationLevel level, RandomStream& rng,
                             const RemoteCostModel& model) {
  const double latency = rng.Uniform(model.latency_min_ms,
                                     model.latency_max_ms);
  const double cost = rng.Uniform(model.cost_min, model.cost_max);
  const ModifierRange& range = model.For(level);
  const double modifier = rng.Uniform(range.lo, range.hi);
  return {RemoteLabelFor(level), latency * modifier, cost * modifier};
}

ResponseRecord RemoteRespond(const TransformedQuery& query, RandomStream& rng,
                             const RemoteCostModel& model) {
  return RemoteRespond(query.privatization_level, rng, model);
}

ResponseRecord LocalRespond(QualityLabel label, RandomStream& rng,
                            const LocalCostModel& model) {
  return {label, rng.Uniform(model.latency_min_ms, model.latency_max_ms),
          model.cost_units};
}

}  // namespace avec
