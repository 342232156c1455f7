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
#ifndef GABIN_COEFFS_H_
#define GABIN_COEFFS_H_

#include <cstdint>
#include <vector>

#include "absl/functional/function_ref.h"
#include "absl/status/statusor.h"

namespace gabin {

enum class CoeffKind {
  kInverseSqrt,  // f_k = |binom(-1/2, k)|, coefficients of (1 - x)^(-1/2)
  kSqrt,         // (-1)^k binom(1/2, k), coefficients of (1 - x)^(1/2)
};

struct CoeffSeq {
  CoeffKind kind;
  std::vector<double> values;  // indices 0..m
};

// f_0..f_m by the multiplicative recurrence f_k = f_{k-1} (2k - 1) / (2k),
// carried in extended precision.
CoeffSeq InverseSqrtCoefficients(int m);

// 1, -f_1 / 1, -f_2 / 3, ..., -f_m / (2m - 1).
CoeffSeq SqrtCoefficients(int m);

// Single coefficient f_k for arbitrary k (0 for k < 0). Uses an extended
// precision table for small k and the asymptotic expansion of
// Gamma(k + 1/2) / Gamma(k + 1) beyond it; both agree to ~1 ulp.
double InverseSqrtCoefficient(std::int64_t k);

// Single coefficient of (1 - x)^(1/2) (0 for k < 0).
double SqrtCoefficient(std::int64_t k);

inline constexpr int kDefaultAlternatingTerms = 32;

// Sum_{l >= 0} (-1)^l a(l) for a sequence that is a Hausdorff moment sequence
// (a(l) = int_0^1 x^l dmu(x), mu >= 0). Uses the Cohen-Rodriguez Villegas-
// Zagier weights; the error is at most 2 a(0) / (3 + sqrt 8)^terms.
double AlternatingMomentSum(absl::FunctionRef<double(int)> term,
                            int terms = kDefaultAlternatingTerms);

// Sum_{l >= 0} (-1)^l f_{t + n l} with f at negative index 0, for
// t in [-n, n - 1].
double AlternatingInverseSqrtSeries(int n, int t);

// Sum_{l >= 0} (-1)^l ftilde_{t + n l} with ftilde at negative index 0, for
// t in [-n + 1, n - 1].
double AlternatingSqrtSeries(int n, int t);

// The 2n-periodic generator of the circulant factor pair:
// b[j] = b_f(omega^j), omega = exp(i pi / n).
struct GroupAlgebraFactors {
  int n = 0;
  std::vector<double> b;  // size 2n
  // Largest |imag| dropped from the inverse transform (0 for the series
  // route).
  double max_imag_residue = 0.0;

  int period() const { return 2 * n; }
  // b at any integer index, reduced mod 2n.
  double At(std::int64_t j) const {
    const std::int64_t p = period();
    std::int64_t r = j % p;
    if (r < 0) r += p;
    return b[static_cast<std::size_t>(r)];
  }
};

struct DftOptions {
  // Residues above imag_tolerance_per_length * 2n are reported as an error.
  double imag_tolerance_per_length = 1e-9;
};

// Evaluates b_f(omega^t), t = 0..2n-1, from the definition: a length-2n
// transform of the 0/1 indicator (n ones), principal square root pointwise,
// inverse transform. Inner sums that vanish exactly (even l != 0) are snapped
// to zero when their magnitude is at round-off level.
absl::StatusOr<GroupAlgebraFactors> GroupAlgebraFactorsByDft(
    int n, const DftOptions& options = {});

// Closed form b_f(omega^{-t}) = 1/(2 sqrt n) + (1/sqrt 2) sum_l (-1)^l f_{t+nl}
// for t in [-n, n - 1].
absl::StatusOr<double> GroupAlgebraCoefficient(int n, int t);

// All 2n values through the closed form (b[j] = coefficient at t = -j mod 2n).
GroupAlgebraFactors GroupAlgebraFactorsBySeries(int n);

}  // namespace gabin

#endif  // GABIN_COEFFS_H_
