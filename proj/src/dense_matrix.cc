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
#include "gabin/dense_matrix.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "gabin/kernels.h"

namespace gabin {

DenseMatrix DenseMatrix::Identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::PrefixSum(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = 1.0;
  }
  return m;
}

DenseMatrix DenseMatrix::Block(std::size_t row0, std::size_t col0,
                               std::size_t rows, std::size_t cols) const {
  assert(row0 + rows <= rows_ && col0 + cols <= cols_);
  DenseMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto src = row(row0 + i).subspan(col0, cols);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

DenseMatrix DenseMatrix::Transpose() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  assert(rows_ == other.rows_ && cols_ == other.cols_);
  kernels::Axpy(1.0, other.data_, data_);
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  assert(rows_ == other.rows_ && cols_ == other.cols_);
  kernels::Axpy(-1.0, other.data_, data_);
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double scale) {
  for (double& v : data_) v *= scale;
  return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double scale, DenseMatrix a) { return a *= scale; }

absl::StatusOr<DenseMatrix> Multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot multiply ", a.rows(), "x", a.cols(), " by ",
                     b.rows(), "x", b.cols()));
  }
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto dst = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik != 0.0) kernels::Axpy(aik, b.row(k), dst);
    }
  }
  return out;
}

absl::StatusOr<DenseMatrix> VStack(const DenseMatrix& top, const DenseMatrix& bottom) {
  if (top.cols() != bottom.cols()) {
    return absl::InvalidArgumentError("VStack: column counts differ");
  }
  DenseMatrix out(top.rows() + bottom.rows(), top.cols());
  std::copy(top.data().begin(), top.data().end(), out.data().begin());
  std::copy(bottom.data().begin(), bottom.data().end(),
            out.data().begin() + top.data().size());
  return out;
}

double FrobeniusDistance(const DenseMatrix& a, const DenseMatrix& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  return std::sqrt(kernels::SquaredDistance(a.data(), b.data()));
}

double MaxAbsDifference(const DenseMatrix& a, const DenseMatrix& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    worst = std::max(worst, std::fabs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

void WriteCsv(const DenseMatrix& m, std::ostream& out) {
  char buf[32];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace gabin
