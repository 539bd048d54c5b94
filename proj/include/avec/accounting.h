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

#ifndef AVEC_ACCOUNTING_H_
#define AVEC_ACCOUNTING_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace avec {

// Rényi divergence of order alpha between the output distributions of k-ary
// randomized response on two different inputs:
//   1/(alpha-1) * log(p^a q^(1-a) + q^a p^(1-a) + (k-2) q)
// with p = e^eps/(e^eps+k-1), q = 1/(e^eps+k-1). Evaluated in log space.
absl::StatusOr<double> KaryRrRdp(double epsilon, uint32_t k, double alpha);
absl::StatusOr<double> BinaryRrRdp(double epsilon, double alpha);
// Laplace mechanism with sensitivity delta_f and scale b:
//   1/(a-1) log( a/(2a-1) e^{(a-1)/l} + (a-1)/(2a-1) e^{-a/l} ),  l = b/delta_f.
absl::StatusOr<double> LaplaceRdp(double delta_f, double scale, double alpha);

// One invocation of a mechanism, described by its RDP curve.
class MechanismSpec {
 public:
  enum class Kind { kKaryRr, kBinaryRr, kLaplace };

  static MechanismSpec KaryRr(double epsilon, uint32_t k);
  static MechanismSpec BinaryRr(double epsilon);
  static MechanismSpec Laplace(double delta_f, double scale);

  Kind kind() const { return kind_; }
  // For RR kinds: the RR parameter. For Laplace: delta_f / scale.
  double PureEpsilon() const;
  // Curve value at order alpha > 1 (alpha is validated by the odometer).
  double RdpAt(double alpha) const;

  double epsilon() const { return epsilon_; }
  uint32_t k() const { return k_; }
  double delta_f() const { return delta_f_; }
  double scale() const { return scale_; }
  std::string Describe() const;

 private:
  MechanismSpec(Kind kind, double epsilon, uint32_t k, double delta_f,
                double scale)
      : kind_(kind), epsilon_(epsilon), k_(k), delta_f_(delta_f),
        scale_(scale) {}

  Kind kind_;
  double epsilon_;
  uint32_t k_;
  double delta_f_;
  double scale_;
};

std::vector<double> DefaultAlphaGrid();

struct DpGuarantee {
  double epsilon = 0.0;
  double delta = 0.0;
  double alpha_star = 0.0;
};

// Append-only ledger of one user's mechanism invocations. Keeps two views:
// the RDP curve on a fixed alpha grid (for reporting) and the running pure-ε
// total, which is what the hard cap epsilon_max bounds.
class PrivacyOdometer {
 public:
  explicit PrivacyOdometer(double epsilon_max,
                           std::vector<double> alpha_grid = DefaultAlphaGrid());

  // Fails with ResourceExhausted ("CapExceeded") if committing the spec would
  // push the pure-ε total above epsilon_max; the ledger is unchanged then.
  absl::Status Append(const MechanismSpec& spec);

  bool CanAfford(double pure_epsilon) const;
  double pure_total() const { return pure_total_; }
  // epsilon_max - pure_total, never negative. +inf for an uncapped ledger.
  double remaining() const;
  double epsilon_max() const { return epsilon_max_; }
  bool capped() const;

  const std::vector<MechanismSpec>& entries() const { return entries_; }
  const std::vector<double>& alpha_grid() const { return alpha_grid_; }
  // Total RDP at each grid order, same indexing as alpha_grid().
  const std::vector<double>& rdp_totals() const { return rdp_totals_; }

 private:
  double epsilon_max_;
  std::vector<double> alpha_grid_;
  std::vector<double> rdp_totals_;
  std::vector<MechanismSpec> entries_;
  double pure_total_ = 0.0;
};

bool IsCapExceeded(const absl::Status& status);

// Largest t <= total such that adding t/count to `start`, `count` times in
// sequence, stays <= limit in floating point. Splitting a budget across
// entities this way can never overshoot the cap by a rounding ulp.
double FitSplitBudget(double start, double total, int count, double limit);

// RDP -> (ε,δ): ε = min_a [ rdp(a) + log(1/δ)/(a-1) ], ties to smaller a.
absl::StatusOr<DpGuarantee> ToDp(std::span<const double> alpha_grid,
                                 std::span<const double> rdp_totals,
                                 double delta_star);
absl::StatusOr<DpGuarantee> ToDp(const PrivacyOdometer& odometer,
                                 double delta_star);

// End-to-end guarantee for a k-query session: ε from ToDp, δ = k·δ_ent + δ*.
absl::StatusOr<DpGuarantee> SessionGuarantee(const PrivacyOdometer& odometer,
                                             int k_queries, double delta_ent,
                                             double delta_star);

// log(1 + q(e^ε - 1)). Report-only; q in [0,1], ε >= 0.
double SubsampleAmplify(double epsilon, double q);

}  // namespace avec

#endif  // AVEC_ACCOUNTING_H_
