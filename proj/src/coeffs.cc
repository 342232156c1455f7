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
#include "gabin/coeffs.h"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace gabin {
namespace {

constexpr std::int64_t kTableSize = std::int64_t{1} << 16;

const std::vector<long double>& InverseSqrtTable() {
  static const std::vector<long double> table = [] {
    std::vector<long double> t(kTableSize);
    t[0] = 1.0L;
    for (std::int64_t k = 1; k < kTableSize; ++k) {
      t[k] = t[k - 1] * static_cast<long double>(2 * k - 1) /
             static_cast<long double>(2 * k);
    }
    return t;
  }();
  return table;
}

// Gamma(k + 1/2) / (sqrt(pi) Gamma(k + 1)), k large.
long double InverseSqrtAsymptotic(std::int64_t k) {
  const long double x = 1.0L / static_cast<long double>(k);
  const long double series =
      1.0L + x * (-1.0L / 8 + x * (1.0L / 128 + x * (5.0L / 1024 +
                                                     x * (-21.0L / 32768))));
  return series / std::sqrt(std::numbers::pi_v<long double> * k);
}

std::mutex& FftwPlannerMutex() {
  static std::mutex mu;
  return mu;
}

// In-place unnormalized transform with kernel exp(+i pi j l / n).
void BackwardDft(std::vector<std::complex<double>>& data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(FftwPlannerMutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf,
                            FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(FftwPlannerMutex());
  fftw_destroy_plan(plan);
}

}  // namespace

CoeffSeq InverseSqrtCoefficients(int m) {
  CoeffSeq seq{CoeffKind::kInverseSqrt, std::vector<double>(m + 1)};
  long double f = 1.0L;
  seq.values[0] = 1.0;
  for (int k = 1; k <= m; ++k) {
    f = f * (2.0L * k - 1.0L) / (2.0L * k);
    seq.values[k] = static_cast<double>(f);
  }
  return seq;
}

CoeffSeq SqrtCoefficients(int m) {
  CoeffSeq seq = InverseSqrtCoefficients(m);
  seq.kind = CoeffKind::kSqrt;
  for (int k = 1; k <= m; ++k) seq.values[k] = -seq.values[k] / (2.0 * k - 1.0);
  return seq;
}

double InverseSqrtCoefficient(std::int64_t k) {
  if (k < 0) return 0.0;
  if (k < kTableSize) return static_cast<double>(InverseSqrtTable()[k]);
  return static_cast<double>(InverseSqrtAsymptotic(k));
}

double SqrtCoefficient(std::int64_t k) {
  if (k < 0) return 0.0;
  if (k == 0) return 1.0;
  return -InverseSqrtCoefficient(k) / static_cast<double>(2 * k - 1);
}

double AlternatingMomentSum(absl::FunctionRef<double(int)> term, int terms) {
  double d = std::pow(3.0 + std::sqrt(8.0), terms);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0;
  double c = -d;
  double s = 0.0;
  for (int k = 0; k < terms; ++k) {
    c = b - c;
    s += c * term(k);
    b *= static_cast<double>(k + terms) * static_cast<double>(k - terms) /
         ((k + 0.5) * (k + 1.0));
  }
  return s / d;
}

// For s >= 0, l -> f_{s + n l} = (1/pi) int_0^1 y^l x^{s-1/2} (1-x)^{-1/2} dx
// with y = x^n, so it is a moment sequence; a leading zero term flips sign.
double AlternatingInverseSqrtSeries(int n, int t) {
  const std::int64_t step = n;
  if (t >= 0) {
    return AlternatingMomentSum(
        [&](int l) { return InverseSqrtCoefficient(t + step * l); });
  }
  return -AlternatingMomentSum(
      [&](int l) { return InverseSqrtCoefficient(t + step * (l + 1)); });
}

// -ftilde_k, k >= 1, is a moment sequence for the same reason.
double AlternatingSqrtSeries(int n, int t) {
  const std::int64_t step = n;
  auto negated_tail = [&](std::int64_t start) {
    return AlternatingMomentSum(
        [&](int l) { return -SqrtCoefficient(start + step * l); });
  };
  if (t > 0) return -negated_tail(t);
  if (t == 0) return 1.0 + negated_tail(step);
  return negated_tail(t + step);
}

absl::StatusOr<GroupAlgebraFactors> GroupAlgebraFactorsByDft(
    int n, const DftOptions& options) {
  if (n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("n must be >= 1, got ", n));
  }
  const std::size_t len = 2 * static_cast<std::size_t>(n);
  std::vector<std::complex<double>> work(len, 0.0);
  for (int k = 0; k < n; ++k) work[k] = 1.0;
  BackwardDft(work);

  // Exact nonzero inner sums have magnitude >= 1; the even-l ones vanish.
  const double tolerance = options.imag_tolerance_per_length * len;
  for (auto& s : work) {
    s = std::abs(s) < tolerance ? std::complex<double>(0.0) : std::sqrt(s);
  }
  BackwardDft(work);

  GroupAlgebraFactors out;
  out.n = n;
  out.b.resize(len);
  for (std::size_t j = 0; j < len; ++j) {
    out.b[j] = work[j].real() / static_cast<double>(len);
    out.max_imag_residue = std::max(
        out.max_imag_residue, std::abs(work[j].imag()) / static_cast<double>(len));
  }
  if (out.max_imag_residue > tolerance) {
    return absl::InternalError(absl::StrCat(
        "imaginary residue ", out.max_imag_residue, " exceeds tolerance ",
        tolerance, " for n = ", n, "; square-root branch is inconsistent"));
  }
  return out;
}

absl::StatusOr<double> GroupAlgebraCoefficient(int n, int t) {
  if (n < 1) {
    return absl::InvalidArgumentError(absl::StrCat("n must be >= 1, got ", n));
  }
  if (t < -n || t > n - 1) {
    return absl::OutOfRangeError(
        absl::StrCat("t = ", t, " outside [", -n, ", ", n - 1, "]"));
  }
  return 0.5 / std::sqrt(static_cast<double>(n)) +
         std::numbers::sqrt2 / 2.0 * AlternatingInverseSqrtSeries(n, t);
}

GroupAlgebraFactors GroupAlgebraFactorsBySeries(int n) {
  GroupAlgebraFactors out;
  out.n = n;
  out.b.resize(2 * static_cast<std::size_t>(n));
  const double offset = 0.5 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < 2 * n; ++j) {
    const int t = j <= n ? -j : 2 * n - j;
    out.b[j] = offset + std::numbers::sqrt2 / 2.0 * AlternatingInverseSqrtSeries(n, t);
  }
  return out;
}

}  // namespace gabin
