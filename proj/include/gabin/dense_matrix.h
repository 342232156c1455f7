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
#ifndef GABIN_DENSE_MATRIX_H_
#define GABIN_DENSE_MATRIX_H_

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace gabin {

// Row-major dense real matrix. Used for the verification path only; the
// streaming mechanism never materializes factors.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix Identity(std::size_t n);
  // Lower-triangular all-ones (prefix-sum workload).
  static DenseMatrix PrefixSum(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * cols_, cols_);
  }
  std::span<double> row(std::size_t i) {
    return std::span<double>(data_).subspan(i * cols_, cols_);
  }

  DenseMatrix Block(std::size_t row0, std::size_t col0, std::size_t rows,
                    std::size_t cols) const;
  DenseMatrix Transpose() const;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double scale);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double scale, DenseMatrix a);

// Matrix product; fails on inner-dimension mismatch.
absl::StatusOr<DenseMatrix> Multiply(const DenseMatrix& a, const DenseMatrix& b);

// Stacks `top` over `bottom` (equal column counts).
absl::StatusOr<DenseMatrix> VStack(const DenseMatrix& top, const DenseMatrix& bottom);

double FrobeniusDistance(const DenseMatrix& a, const DenseMatrix& b);
double MaxAbsDifference(const DenseMatrix& a, const DenseMatrix& b);

// CSV, one row per line, 17 significant digits.
void WriteCsv(const DenseMatrix& m, std::ostream& out);

}  // namespace gabin

#endif  // GABIN_DENSE_MATRIX_H_
