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
#ifndef GABIN_VERIFY_H_
#define GABIN_VERIFY_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "gabin/dense_matrix.h"

namespace gabin {

// Numerical oracles for the structural facts the construction relies on.
enum class LemmaId {
  kRealValued,          // L1: imaginary parts of b vanish
  kClosedForm,          // L2: series route equals the transform route
  kMonotone,            // L3
  kValueBounds,         // L4
  kLastRow,             // L5: sign and range of the last row of L
  kSquareRoot,          // L6: C^2 = 2M - E and the E/(2 sqrt n) +- C/2 blocks
  kNormFormula,         // L7
  kBinning,             // BIN
  kPerturbation,        // PERT
  kInverseNorm,         // INV: ||L_i^{-1}||_2 <= 250 and ||C^{-1}||_2 <= 3
  kMain,                // MAIN
  kPartialSum,          // F0
  kQuadraticForm,       // F3: e^T C^{-1} e >= 1.02 sqrt n
};

std::span<const LemmaId> AllLemmas();
std::string_view LemmaTag(LemmaId id);
absl::StatusOr<LemmaId> ParseLemmaTag(std::string_view tag);

struct LemmaReport {
  LemmaId id;
  int n = 0;
  bool passed = false;
  // Signed distance to the bound (negative means slack) or, for identities,
  // the largest absolute discrepancy. passed <=> worst_margin <= tolerance.
  double worst_margin = 0.0;
  std::string witness;  // where the tightest case occurred
};

inline constexpr std::size_t kVerifyDenseLimit = 1024;

// Runs one oracle. Fails for n < 1 or when a dense check exceeds the limit.
absl::StatusOr<LemmaReport> Check(LemmaId id, int n, double tolerance = 1e-9);

// Every (id, n) pair, evaluated concurrently; output ordered by n then id.
absl::StatusOr<std::vector<LemmaReport>> RunGrid(std::span<const LemmaId> ids,
                                                 std::span<const int> ns,
                                                 double tolerance = 1e-9);

// "lemma_id,n,passed,worst_margin,witness" with 17 significant digits.
std::string FormatReportCsv(const LemmaReport& report);

// Entries q_t, t in (-n, n), of C^{-1} = (1 / sqrt 2)(I - A)^{1/2}:
// q_t = (1 / sqrt 2) sum_l (-1)^l ftilde_{t + n l}.
struct ToeplitzInverse {
  int n = 0;
  std::vector<double> q;  // q[t + n - 1]
  // max |C * C^{-1} - I| with C from BuildC.
  double reconstruction_error = 0.0;

  double At(int t) const { return q[t + n - 1]; }
  DenseMatrix Materialize() const;
  // e^T C^{-1} e.
  double QuadraticForm() const;
};

ToeplitzInverse ComputeToeplitzInverse(int n);

}  // namespace gabin

#endif  // GABIN_VERIFY_H_
