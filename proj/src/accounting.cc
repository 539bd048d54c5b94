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

#include "avec/accounting.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"

namespace avec {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double LogSumExp(std::initializer_list<double> terms) {
  double m = -kInf;
  for (double t : terms) m = std::max(m, t);
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - m);
  return m + std::log(s);
}

absl::Status CheckAlpha(double alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError(
        absl::StrCat("RDP order must be finite and > 1, got ", alpha));
  }
  return absl::OkStatus();
}

double KaryRrRdpUnchecked(double epsilon, uint32_t k, double alpha) {
  if (epsilon == 0.0) return 0.0;
  // log p and log q with p = e^eps/(e^eps+k-1), q = 1/(e^eps+k-1).
  const double log_norm = LogSumExp({epsilon, std::log(k - 1.0)});
  const double log_p = epsilon - log_norm;
  const double log_q = -log_norm;
  const double t1 = alpha * log_p + (1.0 - alpha) * log_q;
  const double t2 = alpha * log_q + (1.0 - alpha) * log_p;
  const double t3 = k > 2 ? std::log(k - 2.0) + log_q : -kInf;
  return std::max(0.0, LogSumExp({t1, t2, t3}) / (alpha - 1.0));
}

double LaplaceRdpUnchecked(double delta_f, double scale, double alpha) {
  const double inv_lambda = delta_f / scale;
  const double a = alpha;
  const double t1 = std::log(a / (2.0 * a - 1.0)) + (a - 1.0) * inv_lambda;
  const double t2 = std::log((a - 1.0) / (2.0 * a - 1.0)) - a * inv_lambda;
  return std::max(0.0, LogSumExp({t1, t2}) / (a - 1.0));
}

}  // namespace

absl::StatusOr<double> KaryRrRdp(double epsilon, uint32_t k, double alpha) {
  if (absl::Status s = CheckAlpha(alpha); !s.ok()) return s;
  if (k < 2) return absl::InvalidArgumentError("k-ary RR needs k >= 2");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon must be finite and >= 0");
  }
  return KaryRrRdpUnchecked(epsilon, k, alpha);
}

absl::StatusOr<double> BinaryRrRdp(double epsilon, double alpha) {
  return KaryRrRdp(epsilon, 2, alpha);
}

absl::StatusOr<double> LaplaceRdp(double delta_f, double scale, double alpha) {
  if (absl::Status s = CheckAlpha(alpha); !s.ok()) return s;
  if (!(delta_f > 0.0) || !(scale > 0.0)) {
    return absl::InvalidArgumentError("Laplace needs delta_f > 0, scale > 0");
  }
  return LaplaceRdpUnchecked(delta_f, scale, alpha);
}

MechanismSpec MechanismSpec::KaryRr(double epsilon, uint32_t k) {
  return MechanismSpec(Kind::kKaryRr, epsilon, k, 0.0, 0.0);
}

MechanismSpec MechanismSpec::BinaryRr(double epsilon) {
  return MechanismSpec(Kind::kBinaryRr, epsilon, 2, 0.0, 0.0);
}

MechanismSpec MechanismSpec::Laplace(double delta_f, double scale) {
  return MechanismSpec(Kind::kLaplace, delta_f / scale, 0, delta_f, scale);
}

double MechanismSpec::PureEpsilon() const { return epsilon_; }

double MechanismSpec::RdpAt(double alpha) const {
  switch (kind_) {
    case Kind::kKaryRr:
      return KaryRrRdpUnchecked(epsilon_, k_, alpha);
    case Kind::kBinaryRr:
      return KaryRrRdpUnchecked(epsilon_, 2, alpha);
    case Kind::kLaplace:
      return LaplaceRdpUnchecked(delta_f_, scale_, alpha);
  }
  return kInf;
}

std::string MechanismSpec::Describe() const {
  switch (kind_) {
    case Kind::kKaryRr:
      return absl::StrCat("KaryRR(", epsilon_, ",", k_, ")");
    case Kind::kBinaryRr:
      return absl::StrCat("BinaryRR(", epsilon_, ")");
    case Kind::kLaplace:
      return absl::StrCat("Laplace(", delta_f_, ",", scale_, ")");
  }
  return "?";
}

std::vector<double> DefaultAlphaGrid() {
  return {1.5, 2.0, 3.0, 4.0, 8.0, 16.0, 32.0, 64.0};
}

PrivacyOdometer::PrivacyOdometer(double epsilon_max,
                                 std::vector<double> alpha_grid)
    : epsilon_max_(epsilon_max),
      alpha_grid_(std::move(alpha_grid)),
      rdp_totals_(alpha_grid_.size(), 0.0) {}

absl::Status PrivacyOdometer::Append(const MechanismSpec& spec) {
  const double cost = spec.PureEpsilon();
  if (!(cost >= 0.0)) {
    return absl::InvalidArgumentError("mechanism epsilon must be >= 0");
  }
  if (!CanAfford(cost)) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "CapExceeded: committed ", pure_total_, " + ", cost,
        " would exceed epsilon_max ", epsilon_max_));
  }
  for (size_t i = 0; i < alpha_grid_.size(); ++i) {
    rdp_totals_[i] += spec.RdpAt(alpha_grid_[i]);
  }
  pure_total_ += cost;
  entries_.push_back(spec);
  return absl::OkStatus();
}

bool PrivacyOdometer::CanAfford(double pure_epsilon) const {
  return pure_total_ + pure_epsilon <= epsilon_max_;
}

double PrivacyOdometer::remaining() const {
  if (!capped()) return kInf;
  return std::max(0.0, epsilon_max_ - pure_total_);
}

bool PrivacyOdometer::capped() const { return std::isfinite(epsilon_max_); }

bool IsCapExceeded(const absl::Status& status) {
  return absl::IsResourceExhausted(status);
}

double FitSplitBudget(double start, double total, int count, double limit) {
  if (count <= 0) return total;
  double t = total;
  for (;;) {
    const double per = t / count;
    double running = start;
    for (int i = 0; i < count; ++i) running += per;
    if (running <= limit || t <= 0.0) return t;
    t = std::nextafter(t, 0.0);
  }
}

absl::StatusOr<DpGuarantee> ToDp(std::span<const double> alpha_grid,
                                 std::span<const double> rdp_totals,
                                 double delta_star) {
  if (!(delta_star > 0.0 && delta_star < 1.0)) {
    return absl::InvalidArgumentError("delta* must be in (0, 1)");
  }
  if (alpha_grid.empty() || alpha_grid.size() != rdp_totals.size()) {
    return absl::InvalidArgumentError("alpha grid and curve sizes differ");
  }
  DpGuarantee best{kInf, delta_star, 0.0};
  const double log_inv_delta = std::log(1.0 / delta_star);
  for (size_t i = 0; i < alpha_grid.size(); ++i) {
    if (absl::Status s = CheckAlpha(alpha_grid[i]); !s.ok()) return s;
    const double eps = rdp_totals[i] + log_inv_delta / (alpha_grid[i] - 1.0);
    if (eps < best.epsilon ||
        (eps == best.epsilon && alpha_grid[i] < best.alpha_star)) {
      best.epsilon = eps;
      best.alpha_star = alpha_grid[i];
    }
  }
  return best;
}

absl::StatusOr<DpGuarantee> ToDp(const PrivacyOdometer& odometer,
                                 double delta_star) {
  return ToDp(odometer.alpha_grid(), odometer.rdp_totals(), delta_star);
}

absl::StatusOr<DpGuarantee> SessionGuarantee(const PrivacyOdometer& odometer,
                                             int k_queries, double delta_ent,
                                             double delta_star) {
  absl::StatusOr<DpGuarantee> g = ToDp(odometer, delta_star);
  if (!g.ok()) return g.status();
  g->delta = k_queries * delta_ent + delta_star;
  return g;
}

double SubsampleAmplify(double epsilon, double q) {
  return std::log1p(q * std::expm1(epsilon));
}

}  // namespace avec
