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

// Built with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <bit>

#include "kernels/kernels_internal.h"

namespace avec::kernels::avx2 {
namespace {

constexpr uint32_t kM0 = 0xD2511F53u;
constexpr uint32_t kM1 = 0xCD9E8D57u;
constexpr uint32_t kW0 = 0x9E3779B9u;
constexpr uint32_t kW1 = 0xBB67AE85u;

// 32x32->64 products of all eight lanes, split into low and high words.
inline void MulHiLo(__m256i a, __m256i m, __m256i* hi, __m256i* lo) {
  const __m256i even = _mm256_mul_epu32(a, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
  *lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0b10101010);
  *hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0b10101010);
}

// 64-bit words -> open-interval uniforms, bit-identical to BitsToOpenUniform.
inline __m256d WordsToUniform(__m256i words) {
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000ll);
  const __m256d in_one_two =
      _mm256_castsi256_pd(_mm256_or_si256(_mm256_srli_epi64(words, 12),
                                          one_bits));
  const __m256d mantissa = _mm256_sub_pd(in_one_two, _mm256_set1_pd(1.0));
  return _mm256_add_pd(mantissa, _mm256_set1_pd(0x1.0p-53));
}

// Eight consecutive Philox blocks starting at block_index, written as 16
// draws in stream order.
inline void EightBlocks(const PhiloxKey& key, uint32_t stream_hi,
                        uint32_t stream_lo, uint64_t block_index,
                        double* out) {
  alignas(32) uint32_t lo_words[8];
  alignas(32) uint32_t hi_words[8];
  for (int j = 0; j < 8; ++j) {
    const uint64_t b = block_index + static_cast<uint64_t>(j);
    lo_words[j] = static_cast<uint32_t>(b);
    hi_words[j] = static_cast<uint32_t>(b >> 32);
  }
  __m256i c0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(lo_words));
  __m256i c1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(hi_words));
  __m256i c2 = _mm256_set1_epi32(static_cast<int>(stream_lo));
  __m256i c3 = _mm256_set1_epi32(static_cast<int>(stream_hi));
  uint32_t k0 = key[0];
  uint32_t k1 = key[1];
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(kM0));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(kM1));
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += kW0;
      k1 += kW1;
    }
    __m256i hi0, lo0, hi1, lo1;
    MulHiLo(c0, m0, &hi0, &lo0);
    MulHiLo(c2, m1, &hi1, &lo1);
    const __m256i vk0 = _mm256_set1_epi32(static_cast<int>(k0));
    const __m256i vk1 = _mm256_set1_epi32(static_cast<int>(k1));
    const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), vk0);
    const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), vk1);
    c0 = n0;
    c1 = lo1;
    c2 = n2;
    c3 = lo0;
  }
  // word0 of block j = r1:r0, word1 = r3:r2. unpacklo covers blocks
  // {0,1 | 4,5}, unpackhi covers {2,3 | 6,7}.
  const __m256d a_lo = WordsToUniform(_mm256_unpacklo_epi32(c0, c1));
  const __m256d a_hi = WordsToUniform(_mm256_unpackhi_epi32(c0, c1));
  const __m256d b_lo = WordsToUniform(_mm256_unpacklo_epi32(c2, c3));
  const __m256d b_hi = WordsToUniform(_mm256_unpackhi_epi32(c2, c3));
  // Interleave word0/word1 per block: [A0 B0 | A4 B4], [A1 B1 | A5 B5].
  const __m256d p01 = _mm256_unpacklo_pd(a_lo, b_lo);
  const __m256d q01 = _mm256_unpackhi_pd(a_lo, b_lo);
  const __m256d p23 = _mm256_unpacklo_pd(a_hi, b_hi);
  const __m256d q23 = _mm256_unpackhi_pd(a_hi, b_hi);
  _mm256_storeu_pd(out + 0, _mm256_permute2f128_pd(p01, q01, 0x20));
  _mm256_storeu_pd(out + 4, _mm256_permute2f128_pd(p23, q23, 0x20));
  _mm256_storeu_pd(out + 8, _mm256_permute2f128_pd(p01, q01, 0x31));
  _mm256_storeu_pd(out + 12, _mm256_permute2f128_pd(p23, q23, 0x31));
}

}  // namespace

void FillUniform(const PhiloxKey& key, uint32_t stream_hi, uint32_t stream_lo,
                 uint64_t first_draw, std::span<double> out) {
  size_t i = 0;
  if ((first_draw & 1) != 0 && !out.empty()) {
    scalar::FillUniform(key, stream_hi, stream_lo, first_draw,
                        out.subspan(0, 1));
    i = 1;
  }
  for (; i + 16 <= out.size(); i += 16) {
    EightBlocks(key, stream_hi, stream_lo, (first_draw + i) >> 1,
                out.data() + i);
  }
  if (i < out.size()) {
    scalar::FillUniform(key, stream_hi, stream_lo, first_draw + i,
                        out.subspan(i));
  }
}

void KaryRr(std::span<const uint32_t> truth, uint32_t k, double keep_prob,
            double other_prob, std::span<const double> u,
            std::span<uint32_t> out) {
  const __m256d p = _mm256_set1_pd(keep_prob);
  const __m256d q = _mm256_set1_pd(other_prob);
  const __m128i last_cell = _mm_set1_epi32(static_cast<int>(k - 2));
  const __m256i even_lanes = _mm256_setr_epi32(0, 2, 4, 6, 0, 2, 4, 6);
  size_t i = 0;
  for (; i + 4 <= truth.size(); i += 4) {
    const __m256d uu = _mm256_loadu_pd(u.data() + i);
    const __m256d keep = _mm256_cmp_pd(uu, p, _CMP_LT_OQ);
    const __m128i t =
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(truth.data() + i));
    __m128i j = _mm256_cvttpd_epi32(_mm256_div_pd(_mm256_sub_pd(uu, p), q));
    j = _mm_min_epu32(j, last_cell);
    const __m128i j_ge_t = _mm_cmpeq_epi32(_mm_max_epu32(j, t), j);
    const __m128i other = _mm_sub_epi32(j, j_ge_t);
    const __m128i keep32 = _mm256_castsi256_si128(
        _mm256_permutevar8x32_epi32(_mm256_castpd_si256(keep), even_lanes));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out.data() + i),
                     _mm_blendv_epi8(other, t, keep32));
  }
  for (; i < truth.size(); ++i) {
    out[i] = scalar::KaryRrOne(truth[i], k, keep_prob, other_prob, u[i]);
  }
}

void BinaryRr(std::span<const uint8_t> bits, double keep_prob,
              std::span<const double> u, std::span<uint8_t> out) {
  const __m256d p = _mm256_set1_pd(keep_prob);
  size_t i = 0;
  for (; i + 4 <= bits.size(); i += 4) {
    const int keep = _mm256_movemask_pd(
        _mm256_cmp_pd(_mm256_loadu_pd(u.data() + i), p, _CMP_LT_OQ));
    for (int lane = 0; lane < 4; ++lane) {
      const uint8_t flip = static_cast<uint8_t>(((keep >> lane) & 1) ^ 1);
      out[i + lane] = static_cast<uint8_t>(bits[i + lane] ^ flip);
    }
  }
  if (i < bits.size()) {
    scalar::BinaryRr(bits.subspan(i), keep_prob, u.subspan(i), out.subspan(i));
  }
}

uint64_t CountEqual(std::span<const uint32_t> a, std::span<const uint32_t> b) {
  uint64_t n = 0;
  size_t i = 0;
  for (; i + 8 <= a.size(); i += 8) {
    const __m256i va =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    const __m256i vb =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
    const int mask =
        _mm256_movemask_ps(_mm256_castsi256_ps(_mm256_cmpeq_epi32(va, vb)));
    n += static_cast<uint64_t>(std::popcount(static_cast<unsigned>(mask)));
  }
  return n + scalar::CountEqual(a.subspan(i), b.subspan(i));
}

}  // namespace avec::kernels::avx2
