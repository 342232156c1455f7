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
#ifndef GABIN_BINNING_H_
#define GABIN_BINNING_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "gabin/coeffs.h"
#include "gabin/dense_matrix.h"
#include "gabin/factorization.h"

namespace gabin {

// Inclusive index range sharing one representative value.
struct Segment {
  int start = 0;
  int end = 0;
  double value = 0.0;

  int length() const { return end - start + 1; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

// Piecewise-constant row over [0, domain_len).
class BinnedRow {
 public:
  BinnedRow() = default;

  // Fails unless the segments tile [0, domain_len) in order.
  static absl::StatusOr<BinnedRow> Create(std::vector<Segment> segments, int domain_len);

  int domain_len() const { return domain_len_; }
  std::span<const Segment> segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }

  double Value(int j) const;
  std::vector<double> Dense() const;

 private:
  BinnedRow(std::vector<Segment> segments, int domain_len)
      : segments_(std::move(segments)), domain_len_(domain_len) {}

  std::vector<Segment> segments_;
  int domain_len_ = 0;
};

// log(1/mu) / log(1 + 2 eta) + 1: bins needed for one decreasing run.
double BinCountBound(double eta, double mu);

// Greedy binning of 1 >= seq[0] >= ... >= seq[m-1] >= 0. Values below mu form
// one trailing bin represented by the midpoint of its first and last values;
// every other bin [k, t] takes the largest t with seq[t] >= seq[k] / (1 + 2eta)
// and is represented by (seq[k] + seq[t]) / 2. Linear time.
absl::StatusOr<BinnedRow> BinDecreasing(std::span<const double> seq, double eta, double mu);

enum class PerturbationMode { kExact, kBound };

inline constexpr double kProvenInverseNormBound = 250.0;
inline constexpr double kEmpiricalInverseNormBound = 19.0;

struct PerturbationParams {
  int n = 0;
  double zeta = 0.0;
  double eta = 0.0;
  double mu = 0.0;
  double psi_L = 0.0;  // max_i ||L_i||_F ||L_i^{-1}||_2
  double chi_L = 0.0;  // max_i ||L_i^{-1}||_2
  PerturbationMode mode = PerturbationMode::kBound;

  // eta = zeta / (17 psi), mu = zeta / (17 n chi).
  static absl::StatusOr<PerturbationParams> FromNorms(int n, double zeta, double psi,
                                                      double chi, PerturbationMode mode);
};

struct PerturbationOptions {
  PerturbationMode mode = PerturbationMode::kBound;
  // Bound mode only: use the observed ||L_i^{-1}||_2 <= 19 instead of the
  // proven 250.
  bool empirical_inverse_bound = false;
  std::size_t dense_limit = kDefaultDenseLimit;
};

// Exact mode measures ||L_i||_F and sigma_min(L_i) densely; bound mode uses
// chi = 250 and ||L_i||_F <= sqrt(n * MaxRowNormSquaredFormula(n)).
absl::StatusOr<PerturbationParams> ComputePerturbationParams(
    const GroupAlgebraFactors& factors, double zeta, const PerturbationOptions& options);

// Which parts of the last row were nonempty when it was split.
struct SplitSummary {
  int increasing_bins = 0;  // first n entries
  int positive_bins = 0;    // nonnegative prefix of the second half
  int negative_bins = 0;    // negative suffix of the second half
  bool skipped = false;     // n = 1: L_2 is singular, L-hat = L

  int nonempty_parts() const {
    return (increasing_bins > 0) + (positive_bins > 0) + (negative_bins > 0);
  }
};

// Binned approximation L-hat of the group-algebra L. Only the last row is
// stored; row i evaluates the last row at (j + n - 1 - i) mod 2n.
class BinnedFactor {
 public:
  BinnedFactor() = default;
  BinnedFactor(int n, BinnedRow last_row, PerturbationParams params, SplitSummary split)
      : n_(n), last_row_(std::move(last_row)), params_(params), split_(split) {}

  int n() const { return n_; }
  const BinnedRow& last_row() const { return last_row_; }
  const PerturbationParams& params() const { return params_; }
  const SplitSummary& split() const { return split_; }
  std::size_t segment_count() const { return last_row_.size(); }

  // Offset of row i into the last row.
  int Shift(int row) const { return n_ - 1 - row; }
  double Value(int row, int col) const;
  std::vector<double> DenseRow(int row) const;
  // n x 2n.
  DenseMatrix Materialize() const;

 private:
  int n_ = 0;
  BinnedRow last_row_;
  PerturbationParams params_;
  SplitSummary split_;
};

// Splits the last row of L into its increasing first half, nonnegative
// decreasing prefix of the second half and negative suffix; bins each with
// BinDecreasing (reversing or negating as needed) and concatenates.
absl::StatusOr<BinnedFactor> BinFactor(const GroupAlgebraFactors& factors,
                                       const PerturbationParams& params);

// R-hat = (Lhat_1^{-1} L_1 R_1 ; Lhat_2^{-1} L_2 R_2), 2n x n.
absl::StatusOr<DenseMatrix> BuildRHat(const DenseMatrix& l, const DenseMatrix& l_hat,
                                      const DenseMatrix& r, double min_rcond = 1e-12);

struct PerturbationViolation {
  double max_violation = 0.0;  // max |P_ij| - eta |L_ij| - mu; <= 0 is valid
  std::size_t row = 0;
  std::size_t col = 0;
};

absl::StatusOr<PerturbationViolation> ValidatePerturbation(const DenseMatrix& l,
                                                           const DenseMatrix& l_hat,
                                                           double eta, double mu);

// Versioned JSON text; doubles round-trip bit-exactly.
std::string SerializeBinnedFactor(const BinnedFactor& factor);
absl::StatusOr<BinnedFactor> ParseBinnedFactor(std::string_view text);

}  // namespace gabin

#endif  // GABIN_BINNING_H_
