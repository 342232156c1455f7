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
#include "gabin/streaming.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"

namespace gabin {
namespace {

MechanismConfig Config(int n, double sigma, NoiseMode mode, std::uint64_t seed = 1) {
  MechanismConfig c;
  c.n = n;
  c.noise_multiplier = sigma;
  c.noise_mode = mode;
  c.seed = seed;
  return c;
}

TEST(MechanismTest, ZeroNoiseGivesExactPrefixSums) {
  for (int n : {1, 2, 7, 64}) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = (i % 3) - 0.5;
    for (NoiseMode mode : {NoiseMode::kReference, NoiseMode::kStreaming}) {
      auto out = RunStream(x, Config(n, 0.0, mode));
      ASSERT_TRUE(out.ok());
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        sum += x[i];
        EXPECT_EQ((*out)[i], sum);
      }
    }
  }
}

TEST(MechanismTest, ModesAgree) {
  for (int n : {1, 2, 3, 17, 256, 1000}) {
    std::vector<double> x(n, 1.0);
    auto ref = RunStream(x, Config(n, 1.0, NoiseMode::kReference, 42));
    auto str = RunStream(x, Config(n, 1.0, NoiseMode::kStreaming, 42));
    ASSERT_TRUE(ref.ok() && str.ok());
    for (int i = 0; i < n; ++i) EXPECT_NEAR((*ref)[i], (*str)[i], 1e-9) << n << " " << i;
  }
}

// estimate_i - true_i = noise_std * (L-hat z)_i with z the unit noise.
TEST(MechanismTest, MatchesDenseAlgebraicForm) {
  for (int n : {1, 5, 32}) {
    auto mech = Mechanism::Create(Config(n, 1.0, NoiseMode::kStreaming, 9));
    ASSERT_TRUE(mech.ok());
    const DenseMatrix l_hat = mech->ExportFactor().Materialize();
    for (int i = 0; i < n; ++i) {
      double noise = 0.0;
      for (int j = 0; j < 2 * n; ++j) noise += l_hat(i, j) * mech->UnitNoise(j);
      auto est = mech->Step(0.0);
      ASSERT_TRUE(est.ok());
      EXPECT_NEAR(*est, mech->noise_std() * noise, 1e-11) << n << " " << i;
    }
  }
}

TEST(MechanismTest, ExhaustionAndReset) {
  auto mech = Mechanism::Create(Config(3, 1.0, NoiseMode::kStreaming, 5));
  ASSERT_TRUE(mech.ok());
  std::vector<double> first;
  for (int i = 0; i < 3; ++i) first.push_back(*mech->Step(1.0));
  EXPECT_EQ(mech->Step(1.0).status().code(), absl::StatusCode::kOutOfRange);
  mech->Reset(5);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(*mech->Step(1.0), first[i]);
  mech->Reset(6);
  EXPECT_NE(*mech->Step(1.0), first[0]);
}

TEST(MechanismTest, ResourceContract) {
  for (int n : {1, 2, 17, 256, 2048}) {
    auto mech = Mechanism::Create(Config(n, 1.0, NoiseMode::kStreaming));
    ASSERT_TRUE(mech.ok());
    const std::size_t segments = mech->segment_count();
    EXPECT_LE(mech->ResidentReals(), 4 * segments) << n;
    EXPECT_EQ(mech->ResidentIndices(), segments);
    for (int i = 0; i < n; ++i) {
      const std::uint64_t before = mech->noise_reads();
      ASSERT_TRUE(mech->Step(1.0).ok());
      EXPECT_LE(mech->noise_reads() - before, 2 * segments + 1) << n << " " << i;
    }
  }
}

TEST(MechanismTest, SensitivityModes) {
  MechanismConfig c = Config(64, 2.0, NoiseMode::kStreaming);
  c.perturbation.mode = PerturbationMode::kExact;
  c.sensitivity_mode = SensitivityMode::kExactRHat;
  auto exact = Mechanism::Create(c);
  c.sensitivity_mode = SensitivityMode::kNormBound;
  auto bound = Mechanism::Create(c);
  ASSERT_TRUE(exact.ok() && bound.ok());
  const double base = std::sqrt(MaxRowNormSquaredFormula(64));
  EXPECT_GE(exact->sensitivity(), base * (1 - 1e-12));
  EXPECT_LE(exact->sensitivity(), bound->sensitivity());
  EXPECT_LE(exact->sensitivity(), base * 1.5);
  EXPECT_DOUBLE_EQ(exact->noise_std(), 2.0 * exact->sensitivity());

  auto one = Mechanism::Create(Config(1, 1.0, NoiseMode::kStreaming));
  ASSERT_TRUE(one.ok());
  EXPECT_EQ(one->sensitivity(), 1.0);
}

TEST(MechanismTest, ConfigValidation) {
  EXPECT_FALSE(Mechanism::Create(Config(0, 1.0, NoiseMode::kStreaming)).ok());
  EXPECT_FALSE(Mechanism::Create(Config(4, -1.0, NoiseMode::kStreaming)).ok());
  EXPECT_FALSE(Mechanism::Create(Config(4, NAN, NoiseMode::kStreaming)).ok());
  MechanismConfig c = Config(4, 1.0, NoiseMode::kStreaming);
  c.zeta = 0.0;
  EXPECT_FALSE(Mechanism::Create(c).ok());
  c.zeta = 1.01;
  EXPECT_FALSE(Mechanism::Create(c).ok());
  std::vector<double> too_long(5, 1.0);
  EXPECT_FALSE(RunStream(too_long, Config(4, 1.0, NoiseMode::kStreaming)).ok());
}

TEST(EmpiricalErrorTest, DeterministicAndCloseToTheory) {
  MechanismConfig c = Config(8, 1.0, NoiseMode::kStreaming, 100);
  std::vector<double> x(8, 0.0);
  auto a = EmpiricalError(c, 4000, x);
  auto b = EmpiricalError(c, 4000, x);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->per_step_mse, b->per_step_mse);
  auto mech = Mechanism::Create(c);
  ASSERT_TRUE(mech.ok());
  const DenseMatrix l_hat = mech->ExportFactor().Materialize();
  for (int i = 0; i < 8; ++i) {
    double row_sq = 0.0;
    for (int j = 0; j < 16; ++j) row_sq += l_hat(i, j) * l_hat(i, j);
    const double expected = mech->noise_std() * mech->noise_std() * row_sq;
    // Relative standard error of a 4000-sample variance is about 2.2%.
    EXPECT_NEAR(a->per_step_mse[i] / expected, 1.0, 0.12) << i;
  }
  EXPECT_FALSE(EmpiricalError(c, 0, x).ok());
}

}  // namespace
}  // namespace gabin
