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
#include "gabin/verify.h"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "gabin/coeffs.h"
#include "gabin/factorization.h"

namespace gabin {
namespace {

TEST(VerifyTest, TagsRoundTrip) {
  EXPECT_EQ(AllLemmas().size(), 13u);
  for (LemmaId id : AllLemmas()) {
    auto parsed = ParseLemmaTag(LemmaTag(id));
    ASSERT_TRUE(parsed.ok());
    EXPECT_EQ(*parsed, id);
  }
  EXPECT_EQ(ParseLemmaTag("L9").status().code(), absl::StatusCode::kInvalidArgument);
}

TEST(VerifyTest, NormFormulaAtTwo) {
  auto r = Check(LemmaId::kNormFormula, 2);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->passed);
  EXPECT_LT(r->worst_margin, 1e-9);
  auto b = GroupAlgebraFactorsByDft(2);
  ASSERT_TRUE(b.ok());
  auto l = MaterializeL(*b);
  ASSERT_TRUE(l.ok());
  EXPECT_NEAR(ExactNorms(*l).max_row_sq, 1.20711, 1e-5);
}

TEST(VerifyTest, InverseNormsStayBelowNineteenAt64) {
  auto r = Check(LemmaId::kInverseNorm, 64);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->passed);
  EXPECT_EQ(r->witness.find("exceeds_19"), std::string::npos) << r->witness;
}

TEST(VerifyTest, PartialSumAtFourIsExact) {
  auto r = Check(LemmaId::kPartialSum, 4, 1e-14);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->passed);
  EXPECT_LE(std::fabs(r->worst_margin), 1e-14);
}

TEST(VerifyTest, EveryOracleOnSmallGrid) {
  const std::vector<int> ns = {1, 2, 3, 4, 5, 8, 16};
  auto reports = RunGrid(AllLemmas(), ns);
  ASSERT_TRUE(reports.ok()) << reports.status();
  ASSERT_EQ(reports->size(), 13 * ns.size());
  for (std::size_t k = 0; k < reports->size(); ++k) {
    const LemmaReport& r = (*reports)[k];
    EXPECT_EQ(r.n, ns[k / 13]);
    EXPECT_EQ(r.id, AllLemmas()[k % 13]);
    EXPECT_TRUE(r.passed) << FormatReportCsv(r);
    EXPECT_EQ(r.passed, r.worst_margin <= 1e-9);
  }
}

TEST(VerifyTest, DegenerateAndErrorCases) {
  auto r = Check(LemmaId::kInverseNorm, 1);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r->passed);
  EXPECT_EQ(r->witness.rfind("skipped:", 0), 0u);
  EXPECT_EQ(Check(LemmaId::kMonotone, 0).status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(Check(LemmaId::kSquareRoot, 2048).status().code(),
            absl::StatusCode::kResourceExhausted);
  // Non-dense oracles have no size limit.
  auto big = Check(LemmaId::kClosedForm, 4096);
  ASSERT_TRUE(big.ok());
  EXPECT_TRUE(big->passed);
}

TEST(VerifyTest, ReportCsvFormat) {
  const LemmaReport r{LemmaId::kMain, 8, true, -0.25, "x"};
  EXPECT_EQ(FormatReportCsv(r), "MAIN,8,true,-0.25,x");
}

TEST(ToeplitzInverseTest, NOne) {
  const ToeplitzInverse inv = ComputeToeplitzInverse(1);
  ASSERT_EQ(inv.q.size(), 1u);
  EXPECT_NEAR(inv.At(0), 1.0, 1e-15);
  EXPECT_LT(inv.reconstruction_error, 1e-14);
}

TEST(ToeplitzInverseTest, RowSumsAtEight) {
  const int n = 8;
  const ToeplitzInverse inv = ComputeToeplitzInverse(n);
  EXPECT_LT(inv.reconstruction_error, 1e-13);
  const DenseMatrix c_inv = inv.Materialize();
  for (int k = 0; k < n; ++k) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += c_inv(k, j);
    const double expected = std::numbers::sqrt2 * AlternatingInverseSqrtSeries(n, k);
    EXPECT_NEAR(row, expected, 1e-13) << k;
    EXPECT_LE(row, std::numbers::sqrt2 * InverseSqrtCoefficient(k) + 1e-15) << k;
  }
}

TEST(ToeplitzInverseTest, QuadraticFormMatchesDense) {
  const ToeplitzInverse inv = ComputeToeplitzInverse(11);
  const DenseMatrix c_inv = inv.Materialize();
  double dense = 0.0;
  for (double v : c_inv.data()) dense += v;
  EXPECT_NEAR(inv.QuadraticForm(), dense, 1e-13);
  EXPECT_GE(inv.QuadraticForm(), 1.02 * std::sqrt(11.0));
}

}  // namespace
}  // namespace gabin
