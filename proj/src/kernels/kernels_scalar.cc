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

#include "kernels/kernels_internal.h"

#include <algorithm>

namespace avec::kernels::scalar {

void FillUniform(const PhiloxKey& key, uint32_t stream_hi, uint32_t stream_lo,
                 uint64_t first_draw, std::span<double> out) {
  for (size_t i = 0; i < out.size(); ++i) {
    const uint64_t draw = first_draw + i;
    const uint64_t block_index = draw >> 1;
    const PhiloxBlock r = Philox4x32(
        {static_cast<uint32_t>(block_index),
         static_cast<uint32_t>(block_index >> 32), stream_lo, stream_hi},
        key);
    const uint64_t word = (draw & 1) ? (uint64_t{r[3]} << 32) | r[2]
                                     : (uint64_t{r[1]} << 32) | r[0];
    out[i] = BitsToOpenUniform(word);
  }
}

uint32_t KaryRrOne(uint32_t truth, uint32_t k, double keep_prob,
                   double other_prob, double u) {
  if (u < keep_prob) return truth;
  // Remaining mass is split into k-1 equal cells of width other_prob.
  uint32_t j = static_cast<uint32_t>(static_cast<int32_t>((u - keep_prob) /
                                                          other_prob));
  j = std::min(j, k - 2);
  return j + (j >= truth ? 1u : 0u);
}

void KaryRr(std::span<const uint32_t> truth, uint32_t k, double keep_prob,
            double other_prob, std::span<const double> u,
            std::span<uint32_t> out) {
  for (size_t i = 0; i < truth.size(); ++i) {
    out[i] = KaryRrOne(truth[i], k, keep_prob, other_prob, u[i]);
  }
}

void BinaryRr(std::span<const uint8_t> bits, double keep_prob,
              std::span<const double> u, std::span<uint8_t> out) {
  for (size_t i = 0; i < bits.size(); ++i) {
    out[i] = u[i] < keep_prob ? bits[i] : static_cast<uint8_t>(bits[i] ^ 1u);
  }
}

uint64_t CountEqual(std::span<const uint32_t> a, std::span<const uint32_t> b) {
  uint64_t n = 0;
  for (size_t i = 0; i < a.size(); ++i) n += (a[i] == b[i]) ? 1 : 0;
  return n;
}

}  // namespace avec::kernels::scalar
