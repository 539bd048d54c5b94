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

#ifndef AVEC_KERNELS_H_
#define AVEC_KERNELS_H_

#include <cstdint>
#include <span>
#include <string_view>

#include "avec/random.h"

namespace avec::kernels {

// Batch inner loops used by the Monte Carlo sweeps. Each entry has a scalar
// reference implementation and, where the CPU allows, an AVX2 variant that
// must produce bit-identical output.
enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);

struct KernelTable {
  Isa isa;

  // out[i] = draw (first_draw + i) of the stream (key, stream_hi, stream_lo).
  void (*fill_uniform)(const PhiloxKey& key, uint32_t stream_hi,
                       uint32_t stream_lo, uint64_t first_draw,
                       std::span<double> out);

  // k-ary randomized response driven by one uniform per element. keep_prob
  // and other_prob are e^eps/(e^eps+k-1) and 1/(e^eps+k-1).
  void (*kary_rr)(std::span<const uint32_t> truth, uint32_t k,
                  double keep_prob, double other_prob,
                  std::span<const double> u, std::span<uint32_t> out);

  // Binary randomized response: keep bit iff u < keep_prob.
  void (*binary_rr)(std::span<const uint8_t> bits, double keep_prob,
                    std::span<const double> u, std::span<uint8_t> out);

  // Number of positions with a[i] == b[i].
  uint64_t (*count_equal)(std::span<const uint32_t> a,
                          std::span<const uint32_t> b);
};

const KernelTable& ScalarKernels();
// nullptr when the binary was built without AVX2 support.
const KernelTable* Avx2Kernels();

bool CpuSupports(Isa isa);

// The table selected at first use: AVX2 when the CPU supports it, unless the
// environment variable AVEC_ISA=scalar is set.
const KernelTable& Active();

// Forces a table for the lifetime of the object (tests, benchmarks).
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  const KernelTable* previous_;
};

}  // namespace avec::kernels

#endif  // AVEC_KERNELS_H_
