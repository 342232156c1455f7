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
#include "gabin/linalg.h"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace gabin {
namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> View(const DenseMatrix& m) {
  return Eigen::Map<const RowMajor>(m.data().data(), m.rows(), m.cols());
}

DenseMatrix FromEigen(const RowMajor& e) {
  DenseMatrix out(e.rows(), e.cols());
  Eigen::Map<RowMajor>(out.data().data(), e.rows(), e.cols()) = e;
  return out;
}

}  // namespace

std::vector<double> SingularValues(const DenseMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return {};
  Eigen::MatrixXd dense = View(m);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(dense);
  const auto& sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

double SpectralNorm(const DenseMatrix& m) {
  const auto sv = SingularValues(m);
  return sv.empty() ? 0.0 : sv.front();
}

absl::StatusOr<double> InverseSpectralNorm(const DenseMatrix& m,
                                           double singular_tolerance) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    return absl::InvalidArgumentError("InverseSpectralNorm needs a square matrix");
  }
  const auto sv = SingularValues(m);
  if (sv.back() <= singular_tolerance * sv.front()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "matrix is numerically singular (sigma_min = ", sv.back(),
        ", sigma_max = ", sv.front(), ")"));
  }
  return 1.0 / sv.back();
}

absl::StatusOr<DenseMatrix> Solve(const DenseMatrix& a, const DenseMatrix& b,
                                  double min_rcond) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) {
    return absl::InvalidArgumentError("Solve: dimension mismatch");
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Eigen::MatrixXd(View(a)));
  const double rcond = lu.rcond();
  if (!(rcond >= min_rcond)) {
    return absl::FailedPreconditionError(
        absl::StrCat("ill-conditioned system, reciprocal condition estimate ", rcond));
  }
  RowMajor x = lu.solve(Eigen::MatrixXd(View(b)));
  return FromEigen(x);
}

absl::StatusOr<DenseMatrix> Inverse(const DenseMatrix& a, double min_rcond) {
  return Solve(a, DenseMatrix::Identity(a.rows()), min_rcond);
}

}  // namespace gabin
