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
#ifndef GABIN_STREAMING_H_
#define GABIN_STREAMING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "gabin/binning.h"
#include "gabin/noise.h"

namespace gabin {

enum class SensitivityMode {
  kExactRHat,  // exact ||R-hat||_{1->2} (dense, gated by dense_limit)
  kNormBound,  // sqrt(F(n)) (1 + 2 (eta sqrt(n F(n)) + mu n) chi)
};

enum class NoiseMode {
  kReference,  // stores z and its prefix sums, O(n) memory
  kStreaming,  // regenerates z_j on demand, O(#segments) memory
};

struct MechanismConfig {
  int n = 1;
  double zeta = 0.5;
  double noise_multiplier = 1.0;  // sigma; noise std is sigma * sensitivity
  SensitivityMode sensitivity_mode = SensitivityMode::kNormBound;
  NoiseMode noise_mode = NoiseMode::kStreaming;
  std::uint64_t seed = 0;
  PerturbationOptions perturbation;
};

absl::Status ValidateConfig(const MechanismConfig& config);

// Continual-counting mechanism releasing (Mx)_i + (L-hat z)_i at step i, where
// z_j ~ N(0, (sigma * sensitivity)^2) i.i.d. over j in [0, 2n).
//
// Row i of L-hat is the last binned row shifted by n - 1 - i, so segment
// [a, e] covers z indices [a - d, e - d] mod 2n with d = n - 1 - i. Moving to
// the next row adds one entering z and drops one leaving z per segment.
class Mechanism {
 public:
  static absl::StatusOr<Mechanism> Create(const MechanismConfig& config);

  // Releases the private prefix-sum estimate including x and advances.
  absl::StatusOr<double> Step(double x);

  // Restarts the stream with a new seed; the factor and sensitivity are kept.
  void Reset(std::uint64_t seed);

  int n() const { return n_; }
  int step_index() const { return step_; }
  double sensitivity() const { return sensitivity_; }
  double noise_std() const { return noise_std_; }
  const MechanismConfig& config() const { return config_; }
  std::size_t segment_count() const { return starts_.size(); }

  // Per-segment sums of the unscaled noise over the current row's windows.
  std::span<const double> bin_sums() const { return bin_sums_; }

  // Reals held by the mechanism: segment values and noise sums plus the
  // running sum, sensitivity and noise scale; in reference mode also the
  // stored noise vector and its prefix table.
  std::size_t ResidentReals() const;
  // Integer words held: one segment start per segment.
  std::size_t ResidentIndices() const { return starts_.size(); }

  // Noise values generated (streaming) or read from the table (reference).
  std::uint64_t noise_reads() const { return noise_reads_; }

  // The binned factor rebuilt from the compact segment arrays.
  BinnedFactor ExportFactor() const;

  // Unscaled noise z_j / (sigma * sensitivity) as used by this mechanism.
  double UnitNoise(int j) const { return gaussian_(static_cast<std::uint64_t>(j)); }

 private:
  Mechanism() : gaussian_(0) {}

  double ReadNoise(int j);
  double WindowSum(int lo, int hi);  // indices may be negative or wrap once
  void InitBinSums();
  void Advance();

  MechanismConfig config_;
  int n_ = 0;
  int step_ = 0;
  double true_sum_ = 0.0;
  double sensitivity_ = 0.0;
  double noise_std_ = 0.0;
  PerturbationParams params_;
  SplitSummary split_;
  std::vector<int> starts_;
  std::vector<double> values_;
  std::vector<double> bin_sums_;
  GaussianStream gaussian_;
  std::uint64_t noise_reads_ = 0;
  // Reference mode only.
  std::vector<double> noise_;
  std::vector<double> noise_prefix_;
};

// Folds Step over `inputs` (at most n of them).
absl::StatusOr<std::vector<double>> RunStream(std::span<const double> inputs,
                                              const MechanismConfig& config);

struct EmpiricalErrorReport {
  std::vector<double> per_step_mse;
  double mean_rmse = 0.0;  // sqrt(mean_i mse_i)
  double max_rmse = 0.0;   // sqrt(max_i mse_i)
};

// Monte Carlo over `trials` independent seeds (config.seed + trial).
absl::StatusOr<EmpiricalErrorReport> EmpiricalError(const MechanismConfig& config,
                                                    int trials,
                                                    std::span<const double> inputs);

}  // namespace gabin

#endif  // GABIN_STREAMING_H_
