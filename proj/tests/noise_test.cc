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
#include "gabin/noise.h"

#include <cmath>

#include "gtest/gtest.h"

namespace gabin {
namespace {

// Known-answer vectors of the Random123 reference implementation.
TEST(PhiloxTest, KnownAnswerZero) {
  EXPECT_EQ(Philox4x32({0, 0, 0, 0}, {0, 0}),
            (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(PhiloxTest, KnownAnswerAllOnes) {
  EXPECT_EQ(Philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                       {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(PhiloxTest, KnownAnswerPiDigits) {
  EXPECT_EQ(Philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                       {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(PhiloxTest, SeedAndIndexLayout) {
  EXPECT_EQ(Philox4x32({7, 0, 0, 0}, {0x9abcdef0, 0x12345678}),
            (PhiloxCounter{0x2a23b679, 0x84c69006, 0x0481a097, 0x0ae2270e}));
}

TEST(GaussianStreamTest, TransformOfKnownBlocks) {
  EXPECT_NEAR(GaussianStream(0)(0), -0.39766753844418212433, 1e-15);
  EXPECT_NEAR(GaussianStream(0x123456789abcdef0ULL)(7), 1.1052385638199646205, 1e-15);
}

TEST(GaussianStreamTest, DeterministicAndRandomAccess) {
  const GaussianStream a(42);
  const GaussianStream b(42);
  for (std::uint64_t j : {0ULL, 1ULL, 999ULL, 1ULL << 40}) EXPECT_EQ(a(j), b(j));
  EXPECT_NE(GaussianStream(43)(5), a(5));
}

TEST(GaussianStreamTest, FirstMoments) {
  const GaussianStream g(2026);
  constexpr int kSamples = 400000;
  double sum = 0.0;
  double sum_sq = 0.0;
  double sum_4 = 0.0;
  for (int j = 0; j < kSamples; ++j) {
    const double z = g(j);
    sum += z;
    sum_sq += z * z;
    sum_4 += z * z * z * z;
  }
  // Five standard errors.
  EXPECT_NEAR(sum / kSamples, 0.0, 5.0 / std::sqrt(kSamples));
  EXPECT_NEAR(sum_sq / kSamples, 1.0, 5.0 * std::sqrt(2.0 / kSamples));
  EXPECT_NEAR(sum_4 / kSamples, 3.0, 5.0 * std::sqrt(96.0 / kSamples));
}

}  // namespace
}  // namespace gabin
