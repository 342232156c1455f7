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
#ifndef GABIN_LINALG_H_
#define GABIN_LINALG_H_

#include <vector>

#include "absl/status/statusor.h"
#include "gabin/dense_matrix.h"

namespace gabin {

// Singular values in decreasing order (dense divide-and-conquer SVD).
std::vector<double> SingularValues(const DenseMatrix& m);

double SpectralNorm(const DenseMatrix& m);

// ||m^{-1}||_2 = 1 / sigma_min. Fails for non-square or numerically singular
// input (sigma_min <= singular_tolerance * sigma_max).
absl::StatusOr<double> InverseSpectralNorm(const DenseMatrix& m,
                                           double singular_tolerance = 1e-14);

// Solves a * x = b by partial-pivot LU. Fails when the reciprocal condition
// estimate drops below min_rcond; the message carries the estimate.
absl::StatusOr<DenseMatrix> Solve(const DenseMatrix& a, const DenseMatrix& b,
                                  double min_rcond = 1e-12);

// Dense inverse, same failure rule as Solve.
absl::StatusOr<DenseMatrix> Inverse(const DenseMatrix& a, double min_rcond = 1e-12);

}  // namespace gabin

#endif  // GABIN_LINALG_H_
