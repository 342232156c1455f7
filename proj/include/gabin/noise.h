/*
 * Copyright 2026 The gabin Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef GABIN_NOISE_H_
#define GABIN_NOISE_H_

#include <array>
#include <cstdint>

namespace gabin {

// Philox4x32-10 block cipher (Salmon et al., SC'11): a counter-based generator,
// so the j-th output is computable in O(1) without generating 0..j-1.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter Philox4x32(PhiloxCounter counter, PhiloxKey key);

// Standard normal z_j keyed by (seed, index). Transform: the Philox block for
// counter (index_lo, index_hi, 0, 0) and key (seed_lo, seed_hi) gives two
// 64-bit words w0, w1; u1 = (top 53 bits of w0 + 1) / 2^53 in (0, 1],
// u2 = (top 53 bits of w1) / 2^53 in [0, 1); z = sqrt(-2 ln u1) cos(2 pi u2).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : seed_(seed) {}

  double operator()(std::uint64_t index) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace gabin

#endif  // GABIN_NOISE_H_
