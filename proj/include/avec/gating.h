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

#ifndef AVEC_GATING_H_
#define AVEC_GATING_H_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "avec/random.h"

namespace avec {

// Released form of the delegation bit.
struct GateRelease {
  bool true_bit = false;
  bool released_bit = false;
  double epsilon_gate = 0.0;
};

// e^ε / (1 + e^ε); 1 for ε = +inf ("gate randomization off").
double GateKeepProbability(double epsilon_gate);

// Flips g with probability 1/(1+e^ε). Exactly one uniform draw, also when
// ε = +inf.
absl::StatusOr<bool> RandomizeGate(bool g, double epsilon_gate,
                                   RandomStream& rng);
absl::StatusOr<GateRelease> ReleaseGate(bool g, double epsilon_gate,
                                        RandomStream& rng);

// tanh(ε/2): the largest distinguishing advantage any adversary can reach
// against binary randomized response.
double GateAdvantageBound(double epsilon_gate);

enum class GateAttacker {
  kBayes,      // guess the released bit
  kAlwaysOne,  // ignore the release
  kInvert,     // guess the opposite of the release
  kCoinFlip,   // independent fair coin
};

std::string_view GateAttackerName(GateAttacker attacker);

struct AdvantageEstimate {
  double accuracy = 0.0;
  double advantage = 0.0;  // 2 * accuracy - 1
  double sigma = 0.0;      // Monte Carlo std error of `advantage`
  uint64_t samples = 0;
};

// Balanced prior over G, n_samples releases through binary RR, scored with
// the given attacker. Requires n_samples >= 10^4.
absl::StatusOr<AdvantageEstimate> EstimateGateAdvantage(
    double epsilon_gate, uint64_t n_samples, RandomStream& rng,
    GateAttacker attacker = GateAttacker::kBayes);

struct AdjacentPair {
  std::string query;
  std::string neighbour;  // differs from `query` in one entity
};

struct GateProbeReport {
  bool lr_bounded = true;
  double witnessed_epsilon = 0.0;  // +inf when the gate separates the pair
  bool gate_on_query = false;
  bool gate_on_neighbour = false;
};

// Releasing a deterministic gate puts probability 1 vs 0 on the two
// neighbours whenever it separates them. Rejects gates that answer
// inconsistently on repeated calls (i.e. randomized gates).
absl::StatusOr<GateProbeReport> DeterministicGateProbe(
    const std::function<bool(std::string_view)>& gate_fn,
    const AdjacentPair& pair);

}  // namespace avec

#endif  // AVEC_GATING_H_
