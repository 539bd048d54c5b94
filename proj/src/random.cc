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

#include "avec/random.h"

#include "avec/kernels.h"

namespace avec {
namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

inline PhiloxBlock PhiloxRound(const PhiloxBlock& c, const PhiloxKey& k) {
  const uint64_t p0 = uint64_t{kPhiloxM0} * c[0];
  const uint64_t p1 = uint64_t{kPhiloxM1} * c[2];
  return {static_cast<uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
          static_cast<uint32_t>(p1),
          static_cast<uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
          static_cast<uint32_t>(p0)};
}

}  // namespace

PhiloxBlock Philox4x32(PhiloxBlock counter, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    counter = PhiloxRound(counter, key);
  }
  return counter;
}

uint64_t Mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double BitsToOpenUniform(uint64_t word) {
  return (static_cast<double>(word >> 12) + 0.5) * 0x1.0p-52;
}

RandomStream::RandomStream(uint64_t seed, uint32_t stream_hi,
                           uint32_t stream_lo)
    : stream_hi_(stream_hi), stream_lo_(stream_lo) {
  const uint64_t mixed = Mix64(seed);
  key_ = {static_cast<uint32_t>(mixed), static_cast<uint32_t>(mixed >> 32)};
}

RandomStream RandomStream::ForUser(uint64_t trial_seed, uint32_t user_id,
                                   StreamTag tag) {
  return RandomStream(trial_seed, user_id, static_cast<uint32_t>(tag));
}

uint64_t RandomStream::NextBits() {
  const uint64_t block_index = next_draw_ >> 1;
  if (block_index != cached_block_index_) {
    cached_block_ = Philox4x32(
        {static_cast<uint32_t>(block_index),
         static_cast<uint32_t>(block_index >> 32), stream_lo_, stream_hi_},
        key_);
    cached_block_index_ = block_index;
  }
  const bool high = (next_draw_ & 1) != 0;
  ++next_draw_;
  return high ? (uint64_t{cached_block_[3]} << 32) | cached_block_[2]
              : (uint64_t{cached_block_[1]} << 32) | cached_block_[0];
}

double RandomStream::Uniform() { return BitsToOpenUniform(NextBits()); }

double RandomStream::Uniform(double lo, double hi) {
  return lo + (hi - lo) * Uniform();
}

void RandomStream::FillUniform(std::span<double> out) {
  kernels::Active().fill_uniform(key_, stream_hi_, stream_lo_, next_draw_,
                                 out);
  next_draw_ += out.size();
}

}  // namespace avec
