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
#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <limits>

#include "gabin/kernels.h"

namespace gabin {
namespace kernels {
namespace avx2 {
namespace {

inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline double HorizontalMax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline __m256d Abs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

}  // namespace

double Dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double SumSquares(const double* a, std::size_t n) { return Dot(a, a, n); }

double SquaredDistance(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double total = HorizontalSum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

void Axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

// Same operation order as the scalar kernel (no contraction), so the maximum
// is bit-identical and the locating pass finds it exactly.
MaxLocation MaxPerturbationExcess(const double* base, const double* perturbed,
                                  std::size_t n, double eta, double mu) {
  const double kNegInf = -std::numeric_limits<double>::infinity();
  if (n == 0) return {kNegInf, 0};
  const __m256d veta = _mm256_set1_pd(eta);
  const __m256d vmu = _mm256_set1_pd(mu);
  __m256d vmax = _mm256_set1_pd(kNegInf);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d b = _mm256_loadu_pd(base + i);
    const __m256d p = _mm256_loadu_pd(perturbed + i);
    const __m256d slack = _mm256_add_pd(_mm256_mul_pd(veta, Abs(b)), vmu);
    vmax = _mm256_max_pd(vmax, _mm256_sub_pd(Abs(_mm256_sub_pd(p, b)), slack));
  }
  double best = HorizontalMax(vmax);
  for (; i < n; ++i) {
    const double slack = eta * std::fabs(base[i]) + mu;
    const double excess = std::fabs(perturbed[i] - base[i]) - slack;
    if (excess > best) best = excess;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double slack = eta * std::fabs(base[j]) + mu;
    if (std::fabs(perturbed[j] - base[j]) - slack == best) return {best, j};
  }
  return {best, 0};  // NaN inputs
}

}  // namespace avx2
}  // namespace kernels
}  // namespace gabin
