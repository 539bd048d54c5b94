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

#ifndef AVEC_RANDOM_H_
#define AVEC_RANDOM_H_

#include <array>
#include <cstdint>
#include <span>

namespace avec {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every draw is
// a pure function of (key, counter), so streams can be split by counter words
// without any shared state.
using PhiloxBlock = std::array<uint32_t, 4>;
using PhiloxKey = std::array<uint32_t, 2>;

PhiloxBlock Philox4x32(PhiloxBlock counter, PhiloxKey key);

// SplitMix64 finalizer; used to turn seeds into Philox keys.
uint64_t Mix64(uint64_t x);

// Maps a 64-bit word to the open interval (0, 1) using its top 52 bits:
// ((w >> 12) + 0.5) * 2^-52. Never returns 0 or 1.
double BitsToOpenUniform(uint64_t word);

// Identifies an independent sub-stream of a trial. Values are part of the
// reproducibility contract; do not renumber.
enum class StreamTag : uint32_t {
  kUserConfig = 1,
  kShuffle = 2,
  kConfidence = 3,
  kBudgetNoise = 4,
  kGate = 5,
  kTransform = 6,
  kTranslationCost = 7,
  kRemote = 8,
  kLocal = 9,
  kTamper = 10,
  kAttack = 11,
  kBootstrap = 12,
  kDemo = 13,
};

// A deterministic stream of uniforms. Draw d uses Philox block d/2 and takes
// the low (d even) or high (d odd) 64-bit half of that block. Counter words:
// c0,c1 = block index, c2 = stream_lo, c3 = stream_hi.
class RandomStream {
 public:
  RandomStream(uint64_t seed, uint32_t stream_hi, uint32_t stream_lo);

  // Stream keyed by (trial seed, user, tag).
  static RandomStream ForUser(uint64_t trial_seed, uint32_t user_id,
                              StreamTag tag);

  // One draw in (0, 1).
  double Uniform();
  // One draw in [lo, hi).
  double Uniform(double lo, double hi);
  uint64_t NextBits();

  // Fills `out` with the next out.size() uniforms; equivalent to calling
  // Uniform() that many times but runs through the batch kernels.
  void FillUniform(std::span<double> out);

  uint64_t draws() const { return next_draw_; }
  const PhiloxKey& key() const { return key_; }
  uint32_t stream_hi() const { return stream_hi_; }
  uint32_t stream_lo() const { return stream_lo_; }

 private:
  PhiloxKey key_;
  uint32_t stream_hi_;
  uint32_t stream_lo_;
  uint64_t next_draw_ = 0;
  uint64_t cached_block_index_ = ~uint64_t{0};
  PhiloxBlock cached_block_{};
};

}  // namespace avec

#endif  // AVEC_RANDOM_H_
