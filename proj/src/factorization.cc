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
#include "gabin/factorization.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "gabin/kernels.h"

namespace gabin {
namespace {

absl::Status CheckDenseLimit(int n, std::size_t limit) {
  if (static_cast<std::size_t>(n) > limit) {
    return absl::ResourceExhaustedError(
        absl::StrCat("n = ", n, " exceeds dense limit ", limit));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<DenseMatrix> MaterializeL(const GroupAlgebraFactors& factors,
                                         std::size_t dense_limit) {
  if (auto s = CheckDenseLimit(factors.n, dense_limit); !s.ok()) return s;
  const std::size_t n = factors.n;
  DenseMatrix l(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < 2 * n; ++j) {
      l(i, j) = factors.At(static_cast<std::int64_t>(j) - static_cast<std::int64_t>(i));
    }
  }
  return l;
}

absl::StatusOr<DenseMatrix> MaterializeR(const GroupAlgebraFactors& factors,
                                         std::size_t dense_limit) {
  if (auto s = CheckDenseLimit(factors.n, dense_limit); !s.ok()) return s;
  const std::size_t n = factors.n;
  DenseMatrix r(2 * n, n);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      r(i, j) = factors.At(static_cast<std::int64_t>(j) - static_cast<std::int64_t>(i));
    }
  }
  return r;
}

DenseMatrix AllOnes(std::size_t n) { return DenseMatrix(n, n, 1.0); }

DenseMatrix NegacyclicShift(std::size_t n) {
  DenseMatrix a(n, n);
  for (std::size_t i = 1; i < n; ++i) a(i, i - 1) = 1.0;
  a(0, n - 1) -= 1.0;
  return a;
}

DenseMatrix BuildC(int n) {
  std::vector<double> phi(n);
  for (int t = 0; t < n; ++t) phi[t] = AlternatingInverseSqrtSeries(n, t);
  DenseMatrix c(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // A^t has +1 on diagonal i - j = t and -1 where i - j = t - n.
      c(i, j) = i >= j ? std::numbers::sqrt2 * phi[i - j]
                       : -std::numbers::sqrt2 * phi[i - j + n];
    }
  }
  return c;
}

DenseMatrix SqrtFactor(int n) {
  const CoeffSeq f = InverseSqrtCoefficients(n > 0 ? n - 1 : 0);
  DenseMatrix c(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) c(i, j) = f.values[i - j];
  }
  return c;
}

NormReport ExactNorms(const DenseMatrix& m) {
  NormReport report;
  std::vector<double> col_sq(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    const double row_sq = kernels::SumSquares(row);
    report.max_row_sq = std::max(report.max_row_sq, row_sq);
    report.frob_sq += row_sq;
    for (std::size_t j = 0; j < m.cols(); ++j) col_sq[j] += row[j] * row[j];
  }
  for (double c : col_sq) report.max_col_sq = std::max(report.max_col_sq, c);
  return report;
}

double MaxRowNormSquaredFormula(int n) {
  long double sum = 0.0L;
  const long double scale = std::numbers::pi_v<long double> / (2.0L * n);
  // Terms l and n + 1 - l coincide; the middle term of odd n is 1.
  for (int l = n / 2; l >= 1; --l) sum += 2.0L / std::sin(scale * (2 * l - 1));
  if (n % 2 == 1) sum += 1.0L;
  return static_cast<double>(0.5L + sum / (2.0L * n));
}

double LogErrorBound(int n) {
  return 1.0 + std::log(static_cast<double>(n)) / std::numbers::pi;
}

absl::StatusOr<ErrorMetrics> ComputeErrorMetrics(const DenseMatrix& left,
                                                 const DenseMatrix& right) {
  if (left.cols() != right.rows()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "left has ", left.cols(), " columns but right has ", right.rows(), " rows"));
  }
  if (left.rows() != right.cols() || right.cols() == 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "product is ", left.rows(), "x", right.cols(), ", expected square"));
  }
  const NormReport l = ExactNorms(left);
  const NormReport r = ExactNorms(right);
  const double col = std::sqrt(r.max_col_sq);
  ErrorMetrics out;
  out.max_se = std::sqrt(l.max_row_sq) * col;
  out.mean_se = std::sqrt(l.frob_sq) * col / std::sqrt(static_cast<double>(right.cols()));
  return out;
}

ErrorMetrics GroupAlgebraErrorMetrics(const GroupAlgebraFactors& factors) {
  // Rows of L and columns of R are all full cyclic shifts of b.
  const double shift_sq = kernels::SumSquares(factors.b);
  return {shift_sq, shift_sq};
}

}  // namespace gabin
