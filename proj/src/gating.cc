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

#include "avec/gating.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "avec/kernels.h"

namespace avec {
namespace {

constexpr uint64_t kMinAdvantageSamples = 10'000;
constexpr size_t kChunk = 1 << 16;
constexpr int kDeterminismChecks = 32;

}  // namespace

double GateKeepProbability(double epsilon_gate) {
  if (std::isinf(epsilon_gate)) return 1.0;
  return 1.0 / (1.0 + std::exp(-epsilon_gate));
}

absl::StatusOr<bool> RandomizeGate(bool g, double epsilon_gate,
                                   RandomStream& rng) {
  if (!(epsilon_gate >= 0.0)) {
    return absl::InvalidArgumentError("epsilon_gate must be >= 0");
  }
  const double u = rng.Uniform();
  return u < GateKeepProbability(epsilon_gate) ? g : !g;
}

absl::StatusOr<GateRelease> ReleaseGate(bool g, double epsilon_gate,
                                        RandomStream& rng) {
  absl::StatusOr<bool> released = RandomizeGate(g, epsilon_gate, rng);
  if (!released.ok()) return released.status();
  return GateRelease{g, *released, epsilon_gate};
}

double GateAdvantageBound(double epsilon_gate) {
  return std::tanh(epsilon_gate / 2.0);
}

std::string_view GateAttackerName(GateAttacker attacker) {
  switch (attacker) {
    case GateAttacker::kBayes:
      return "bayes";
    case GateAttacker::kAlwaysOne:
      return "always-one";
    case GateAttacker::kInvert:
      return "invert";
    case GateAttacker::kCoinFlip:
      return "coin-flip";
  }
  return "?";
}

absl::StatusOr<AdvantageEstimate> EstimateGateAdvantage(
    double epsilon_gate, uint64_t n_samples, RandomStream& rng,
    GateAttacker attacker) {
  if (!(epsilon_gate >= 0.0)) {
    return absl::InvalidArgumentError("epsilon_gate must be >= 0");
  }
  if (n_samples < kMinAdvantageSamples) {
    return absl::InvalidArgumentError("need at least 10^4 samples");
  }
  const kernels::KernelTable& k = kernels::Active();
  const double keep = GateKeepProbability(epsilon_gate);
  std::vector<double> u_truth(kChunk), u_release(kChunk), u_coin(kChunk);
  std::vector<uint8_t> truth(kChunk), released(kChunk);
  std::vector<uint32_t> truth32(kChunk), guess(kChunk);

  uint64_t correct = 0;
  for (uint64_t done = 0; done < n_samples;) {
    const size_t n =
        static_cast<size_t>(std::min<uint64_t>(kChunk, n_samples - done));
    std::span<double> ut(u_truth.data(), n), ur(u_release.data(), n);
    rng.FillUniform(ut);
    rng.FillUniform(ur);
    for (size_t i = 0; i < n; ++i) {
      truth[i] = ut[i] < 0.5 ? 1 : 0;
      truth32[i] = truth[i];
    }
    k.binary_rr({truth.data(), n}, keep, ur, {released.data(), n});
    if (attacker == GateAttacker::kCoinFlip) {
      rng.FillUniform({u_coin.data(), n});
    }
    for (size_t i = 0; i < n; ++i) {
      switch (attacker) {
        case GateAttacker::kBayes:
          guess[i] = released[i];
          break;
        case GateAttacker::kAlwaysOne:
          guess[i] = 1;
          break;
        case GateAttacker::kInvert:
          guess[i] = released[i] ^ 1u;
          break;
        case GateAttacker::kCoinFlip:
          guess[i] = u_coin[i] < 0.5 ? 1 : 0;
          break;
      }
    }
    correct += k.count_equal({truth32.data(), n}, {guess.data(), n});
    done += n;
  }
  AdvantageEstimate est;
  est.samples = n_samples;
  est.accuracy = static_cast<double>(correct) / static_cast<double>(n_samples);
  est.advantage = 2.0 * est.accuracy - 1.0;
  est.sigma = 2.0 * std::sqrt(est.accuracy * (1.0 - est.accuracy) /
                              static_cast<double>(n_samples));
  return est;
}

absl::StatusOr<GateProbeReport> DeterministicGateProbe(
    const std::function<bool(std::string_view)>& gate_fn,
    const AdjacentPair& pair) {
  GateProbeReport report;
  report.gate_on_query = gate_fn(pair.query);
  report.gate_on_neighbour = gate_fn(pair.neighbour);
  for (int i = 0; i < kDeterminismChecks; ++i) {
    if (gate_fn(pair.query) != report.gate_on_query ||
        gate_fn(pair.neighbour) != report.gate_on_neighbour) {
      return absl::FailedPreconditionError(
          "gate_fn is not deterministic; the probe only applies to "
          "deterministic gates");
    }
  }
  if (report.gate_on_query != report.gate_on_neighbour) {
    report.lr_bounded = false;
    report.witnessed_epsilon = std::numeric_limits<double>::infinity();
  }
  return report;
}

}  // namespace avec
