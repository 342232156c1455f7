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
#include <future>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "gabin/coeffs.h"
#include "gabin/factorization.h"
#include "gabin/kernels.h"

namespace gabin {
namespace {

constexpr int kTrialChunks = 8;

absl::StatusOr<double> ExactRHatSensitivity(const GroupAlgebraFactors& factors,
                                            const BinnedFactor& binned,
                                            std::size_t dense_limit) {
  auto l = MaterializeL(factors, dense_limit);
  if (!l.ok()) return l.status();
  auto r = MaterializeR(factors, dense_limit);
  if (!r.ok()) return r.status();
  auto r_hat = BuildRHat(*l, binned.Materialize(), *r);
  if (!r_hat.ok()) return r_hat.status();
  return std::sqrt(ExactNorms(*r_hat).max_col_sq);
}

double NormBoundSensitivity(const PerturbationParams& p) {
  const double f = MaxRowNormSquaredFormula(p.n);
  const double perturbation = p.eta * std::sqrt(p.n * f) + p.mu * p.n;
  return std::sqrt(f) * (1.0 + 2.0 * perturbation * p.chi_L);
}

}  // namespace

absl::Status ValidateConfig(const MechanismConfig& config) {
  if (config.n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("n must be >= 1, got ", config.n));
  }
  if (!(config.zeta > 0.0 && config.zeta <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("zeta must be in (0, 1], got ", config.zeta));
  }
  if (!(config.noise_multiplier >= 0.0) || !std::isfinite(config.noise_multiplier)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "noise multiplier must be finite and >= 0, got ", config.noise_multiplier));
  }
  return absl::OkStatus();
}

absl::StatusOr<Mechanism> Mechanism::Create(const MechanismConfig& config) {
  if (auto s = ValidateConfig(config); !s.ok()) return s;
  auto factors = GroupAlgebraFactorsByDft(config.n);
  if (!factors.ok()) return factors.status();

  PerturbationOptions options = config.perturbation;
  // n = 1 is never binned; exact mode would fail on the singular L_2.
  if (config.n == 1) options.mode = PerturbationMode::kBound;
  auto params = ComputePerturbationParams(*factors, config.zeta, options);
  if (!params.ok()) return params.status();
  auto binned = BinFactor(*factors, *params);
  if (!binned.ok()) return binned.status();

  Mechanism m;
  m.config_ = config;
  m.n_ = config.n;
  m.params_ = *params;
  m.split_ = binned->split();
  if (binned->split().skipped) {
    m.sensitivity_ = std::sqrt(MaxRowNormSquaredFormula(config.n));
  } else if (config.sensitivity_mode == SensitivityMode::kExactRHat) {
    auto sens = ExactRHatSensitivity(*factors, *binned, options.dense_limit);
    if (!sens.ok()) return sens.status();
    m.sensitivity_ = *sens;
  } else {
    m.sensitivity_ = NormBoundSensitivity(*params);
  }
  m.noise_std_ = config.noise_multiplier * m.sensitivity_;
  for (const Segment& s : binned->last_row().segments()) {
    m.starts_.push_back(s.start);
    m.values_.push_back(s.value);
  }
  m.bin_sums_.assign(m.starts_.size(), 0.0);
  m.Reset(config.seed);
  return m;
}

void Mechanism::Reset(std::uint64_t seed) {
  config_.seed = seed;
  gaussian_ = GaussianStream(seed);
  step_ = 0;
  true_sum_ = 0.0;
  noise_reads_ = 0;
  if (config_.noise_mode == NoiseMode::kReference) {
    const int len = 2 * n_;
    noise_.resize(len);
    noise_prefix_.assign(len + 1, 0.0);
    for (int j = 0; j < len; ++j) {
      noise_[j] = gaussian_(static_cast<std::uint64_t>(j));
      noise_prefix_[j + 1] = noise_prefix_[j] + noise_[j];
    }
  }
  InitBinSums();
}

double Mechanism::ReadNoise(int j) {
  const int len = 2 * n_;
  j %= len;
  if (j < 0) j += len;
  ++noise_reads_;
  if (config_.noise_mode == NoiseMode::kReference) return noise_[j];
  return gaussian_(static_cast<std::uint64_t>(j));
}

double Mechanism::WindowSum(int lo, int hi) {
  const int len = 2 * n_;
  const int width = hi - lo;
  lo %= len;
  if (lo < 0) lo += len;
  hi = lo + width;
  noise_reads_ += 2;
  if (hi < len) return noise_prefix_[hi + 1] - noise_prefix_[lo];
  return (noise_prefix_[len] - noise_prefix_[lo]) + noise_prefix_[hi - len + 1];
}

void Mechanism::InitBinSums() {
  const int len = 2 * n_;
  const int shift = n_ - 1;
  const std::size_t count = starts_.size();
  for (std::size_t s = 0; s < count; ++s) {
    const int end = s + 1 < count ? starts_[s + 1] - 1 : len - 1;
    double sum = 0.0;
    for (int p = starts_[s]; p <= end; ++p) sum += ReadNoise(p - shift);
    bin_sums_[s] = sum;
  }
}

void Mechanism::Advance() {
  // Windows for the row that was just released used shift n - 1 - (step_ - 1).
  const int len = 2 * n_;
  const int old_shift = n_ - step_;
  const std::size_t count = starts_.size();
  for (std::size_t s = 0; s < count; ++s) {
    const int start = starts_[s];
    const int end = s + 1 < count ? starts_[s + 1] - 1 : len - 1;
    if (config_.noise_mode == NoiseMode::kReference) {
      bin_sums_[s] = WindowSum(start - old_shift + 1, end - old_shift + 1);
    } else if (end - start + 1 < len) {
      bin_sums_[s] += ReadNoise(end - old_shift + 1) - ReadNoise(start - old_shift);
    }
  }
}

absl::StatusOr<double> Mechanism::Step(double x) {
  if (step_ >= n_) {
    return absl::OutOfRangeError(absl::StrCat("stream exhausted after ", n_, " steps"));
  }
  true_sum_ += x;
  const double estimate = true_sum_ + noise_std_ * kernels::Dot(values_, bin_sums_);
  ++step_;
  if (step_ < n_) Advance();
  return estimate;
}

std::size_t Mechanism::ResidentReals() const {
  return values_.size() + bin_sums_.size() + 3 + noise_.size() + noise_prefix_.size();
}

BinnedFactor Mechanism::ExportFactor() const {
  std::vector<Segment> segments;
  const int len = 2 * n_;
  for (std::size_t s = 0; s < starts_.size(); ++s) {
    const int end = s + 1 < starts_.size() ? starts_[s + 1] - 1 : len - 1;
    segments.push_back({starts_[s], end, values_[s]});
  }
  // The arrays were taken from a valid row, so Create cannot fail.
  return BinnedFactor(n_, *BinnedRow::Create(std::move(segments), len), params_, split_);
}

absl::StatusOr<std::vector<double>> RunStream(std::span<const double> inputs,
                                              const MechanismConfig& config) {
  if (inputs.size() > static_cast<std::size_t>(std::max(config.n, 0))) {
    return absl::InvalidArgumentError(absl::StrCat(
        inputs.size(), " inputs exceed the stream length ", config.n));
  }
  auto mechanism = Mechanism::Create(config);
  if (!mechanism.ok()) return mechanism.status();
  std::vector<double> out;
  out.reserve(inputs.size());
  for (double x : inputs) {
    auto estimate = mechanism->Step(x);
    if (!estimate.ok()) return estimate.status();
    out.push_back(*estimate);
  }
  return out;
}

absl::StatusOr<EmpiricalErrorReport> EmpiricalError(const MechanismConfig& config,
                                                    int trials,
                                                    std::span<const double> inputs) {
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  if (inputs.size() > static_cast<std::size_t>(std::max(config.n, 0))) {
    return absl::InvalidArgumentError("more inputs than the stream length");
  }
  auto prototype = Mechanism::Create(config);
  if (!prototype.ok()) return prototype.status();

  std::vector<double> truth(inputs.size());
  double running = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) truth[i] = running += inputs[i];

  auto run_chunk = [&](int first, int last) {
    Mechanism m = *prototype;
    std::vector<double> sq(inputs.size(), 0.0);
    for (int trial = first; trial < last; ++trial) {
      m.Reset(config.seed + static_cast<std::uint64_t>(trial));
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        const double err = *m.Step(inputs[i]) - truth[i];
        sq[i] += err * err;
      }
    }
    return sq;
  };

  std::vector<std::future<std::vector<double>>> chunks;
  for (int c = 0; c < kTrialChunks; ++c) {
    const int first = static_cast<int>(static_cast<std::int64_t>(trials) * c / kTrialChunks);
    const int last = static_cast<int>(static_cast<std::int64_t>(trials) * (c + 1) / kTrialChunks);
    chunks.push_back(std::async(std::launch::async, run_chunk, first, last));
  }
  EmpiricalErrorReport report;
  report.per_step_mse.assign(inputs.size(), 0.0);
  for (auto& chunk : chunks) {
    const auto sq = chunk.get();
    for (std::size_t i = 0; i < sq.size(); ++i) report.per_step_mse[i] += sq[i];
  }
  double sum = 0.0;
  double worst = 0.0;
  for (double& v : report.per_step_mse) {
    v /= trials;
    sum += v;
    worst = std::max(worst, v);
  }
  if (!inputs.empty()) {
    report.mean_rmse = std::sqrt(sum / static_cast<double>(inputs.size()));
    report.max_rmse = std::sqrt(worst);
  }
  return report;
}

}  // namespace gabin
