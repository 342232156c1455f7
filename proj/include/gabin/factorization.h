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
#ifndef GABIN_FACTORIZATION_H_
#define GABIN_FACTORIZATION_H_

#include <cstddef>

#include "absl/status/statusor.h"
#include "gabin/coeffs.h"
#include "gabin/dense_matrix.h"

namespace gabin {

inline constexpr std::size_t kDefaultDenseLimit = 4096;

// L[i][j] = b[(j - i) mod 2n], n x 2n.
absl::StatusOr<DenseMatrix> MaterializeL(const GroupAlgebraFactors& factors,
                                         std::size_t dense_limit = kDefaultDenseLimit);

// R[i][j] = b[(j - i) mod 2n], 2n x n.
absl::StatusOr<DenseMatrix> MaterializeR(const GroupAlgebraFactors& factors,
                                         std::size_t dense_limit = kDefaultDenseLimit);

// The n x n all-ones matrix E.
DenseMatrix AllOnes(std::size_t n);

// Negacyclic shift A: ones on the subdiagonal, -1 in the top-right corner.
DenseMatrix NegacyclicShift(std::size_t n);

// C = (2M - E)^{1/2} = sqrt(2) sum_t phi_t A^t with
// phi_t = sum_l (-1)^l f_{t + n l}; built from the series, not from b.
DenseMatrix BuildC(int n);

// Lower-triangular Toeplitz square root of M: entries f_{i - j}.
DenseMatrix SqrtFactor(int n);

struct NormReport {
  double max_row_sq = 0.0;  // ||.||^2_{2->inf}
  double max_col_sq = 0.0;  // ||.||^2_{1->2}
  double frob_sq = 0.0;     // ||.||^2_F
};

NormReport ExactNorms(const DenseMatrix& m);

// 1/2 + (1/2n) sum_{l=1}^{n} 1 / sin(pi (2l - 1) / (2n)): the squared maximum
// row norm of L (and column norm of R).
double MaxRowNormSquaredFormula(int n);

// 1 + ln(n) / pi.
double LogErrorBound(int n);

struct ErrorMetrics {
  double mean_se = 0.0;
  double max_se = 0.0;
};

// MaxSE = ||left||_{2->inf} ||right||_{1->2},
// MeanSE = ||left||_F ||right||_{1->2} / sqrt(n), n = right.cols().
absl::StatusOr<ErrorMetrics> ComputeErrorMetrics(const DenseMatrix& left,
                                                 const DenseMatrix& right);

// Same metrics for the circulant pair without materializing it: every row of
// L and column of R is a cyclic shift of b.
ErrorMetrics GroupAlgebraErrorMetrics(const GroupAlgebraFactors& factors);

}  // namespace gabin

#endif  // GABIN_FACTORIZATION_H_
