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

#ifndef AVEC_SRC_KERNELS_KERNELS_INTERNAL_H_
#define AVEC_SRC_KERNELS_KERNELS_INTERNAL_H_

#include <cstdint>
#include <span>

#include "avec/kernels.h"
#include "avec/random.h"

namespace avec::kernels {

namespace scalar {

void FillUniform(const PhiloxKey& key, uint32_t stream_hi, uint32_t stream_lo,
                 uint64_t first_draw, std::span<double> out);
uint32_t KaryRrOne(uint32_t truth, uint32_t k, double keep_prob,
                   double other_prob, double u);
void KaryRr(std::span<const uint32_t> truth, uint32_t k, double keep_prob,
            double other_prob, std::span<const double> u,
            std::span<uint32_t> out);
void BinaryRr(std::span<const uint8_t> bits, double keep_prob,
              std::span<const double> u, std::span<uint8_t> out);
uint64_t CountEqual(std::span<const uint32_t> a, std::span<const uint32_t> b);

}  // namespace scalar

#if defined(AVEC_HAVE_AVX2)
namespace avx2 {

void FillUniform(const PhiloxKey& key, uint32_t stream_hi, uint32_t stream_lo,
                 uint64_t first_draw, std::span<double> out);
void KaryRr(std::span<const uint32_t> truth, uint32_t k, double keep_prob,
            double other_prob, std::span<const double> u,
            std::span<uint32_t> out);
void BinaryRr(std::span<const uint8_t> bits, double keep_prob,
              std::span<const double> u, std::span<uint8_t> out);
uint64_t CountEqual(std::span<const uint32_t> a, std::span<const uint32_t> b);

}  // namespace avx2
#endif

}  // namespace avec::kernels

#endif  // AVEC_SRC_KERNELS_KERNELS_INTERNAL_H_
