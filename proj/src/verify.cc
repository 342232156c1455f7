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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "gabin/binning.h"
#include "gabin/coeffs.h"
#include "gabin/factorization.h"
#include "gabin/kernels.h"
#include "gabin/linalg.h"

namespace gabin {
namespace {

constexpr std::array<LemmaId, 13> kAll = {
    LemmaId::kRealValued,  LemmaId::kClosedForm,   LemmaId::kMonotone,
    LemmaId::kValueBounds, LemmaId::kLastRow,      LemmaId::kSquareRoot,
    LemmaId::kNormFormula, LemmaId::kBinning,      LemmaId::kPerturbation,
    LemmaId::kInverseNorm, LemmaId::kMain,         LemmaId::kPartialSum,
    LemmaId::kQuadraticForm,
};

constexpr std::array<double, 3> kZetaGrid = {0.1, 0.5, 1.0};
constexpr double kBinningZeta = 0.5;

// Tracks the worst (largest) margin and where it happened.
class Worst {
 public:
  template <typename WitnessFn>
  void Update(double margin, WitnessFn&& witness) {
    if (margin > value_ || std::isnan(margin)) {
      value_ = margin;
      witness_ = witness();
    }
  }
  double value() const { return value_; }
  const std::string& witness() const { return witness_; }

 private:
  double value_ = -std::numeric_limits<double>::infinity();
  std::string witness_;
};

LemmaReport Finish(LemmaId id, int n, const Worst& worst, double tolerance,
                   std::string extra = "") {
  LemmaReport r{id, n, worst.value() <= tolerance, worst.value(), worst.witness()};
  if (!extra.empty()) r.witness = r.witness.empty() ? extra : absl::StrCat(r.witness, ";", extra);
  return r;
}

LemmaReport NotApplicable(LemmaId id, int n, std::string_view why) {
  return LemmaReport{id, n, true, 0.0, absl::StrCat("skipped:", std::string(why))};
}

absl::Status CheckDense(int n) {
  if (static_cast<std::size_t>(n) > kVerifyDenseLimit) {
    return absl::ResourceExhaustedError(
        absl::StrCat("n = ", n, " exceeds the verification dense limit ", kVerifyDenseLimit));
  }
  return absl::OkStatus();
}

// b_f(omega^{-t}) for t in [-n, n - 1] from the transform route.
double CoefficientAt(const GroupAlgebraFactors& b, int t) { return b.At(-t); }

struct DenseFactors {
  GroupAlgebraFactors b;
  DenseMatrix l;
  DenseMatrix r;
};

absl::StatusOr<DenseFactors> MakeDense(int n) {
  if (auto s = CheckDense(n); !s.ok()) return s;
  auto b = GroupAlgebraFactorsByDft(n);
  if (!b.ok()) return b.status();
  auto l = MaterializeL(*b);
  if (!l.ok()) return l.status();
  auto r = MaterializeR(*b);
  if (!r.ok()) return r.status();
  return DenseFactors{*std::move(b), *std::move(l), *std::move(r)};
}

// Everything derived from one binned perturbation at a given zeta.
struct PerturbedPair {
  PerturbationParams params;
  BinnedFactor binned;
  DenseMatrix l_hat;
  DenseMatrix r_hat;
  ErrorMetrics base;
  ErrorMetrics perturbed;
};

absl::StatusOr<PerturbedPair> Perturb(const DenseFactors& d, double zeta) {
  PerturbationOptions options;
  options.mode = PerturbationMode::kExact;
  options.dense_limit = kVerifyDenseLimit;
  auto params = ComputePerturbationParams(d.b, zeta, options);
  if (!params.ok()) return params.status();
  auto binned = BinFactor(d.b, *params);
  if (!binned.ok()) return binned.status();
  DenseMatrix l_hat = binned->Materialize();
  auto r_hat = BuildRHat(d.l, l_hat, d.r);
  if (!r_hat.ok()) return r_hat.status();
  auto base = ComputeErrorMetrics(d.l, d.r);
  if (!base.ok()) return base.status();
  auto perturbed = ComputeErrorMetrics(l_hat, *r_hat);
  if (!perturbed.ok()) return perturbed.status();
  return PerturbedPair{*params, *std::move(binned), std::move(l_hat), *std::move(r_hat),
                       *base, *perturbed};
}

// Largest number of constant runs in any row of L-hat (a bin may wrap).
std::size_t MaxRunsPerRow(const BinnedFactor& f) {
  std::size_t worst = 0;
  for (int i = 0; i < f.n(); ++i) {
    const auto row = f.DenseRow(i);
    std::size_t runs = 1;
    for (std::size_t j = 1; j < row.size(); ++j) runs += row[j] != row[j - 1];
    worst = std::max(worst, runs);
  }
  return worst;
}

absl::StatusOr<LemmaReport> CheckRealValued(int n, double tol) {
  DftOptions loose;
  loose.imag_tolerance_per_length = std::numeric_limits<double>::infinity();
  auto b = GroupAlgebraFactorsByDft(n, loose);
  if (!b.ok()) return b.status();
  Worst w;
  w.Update(b->max_imag_residue, [] { return std::string("max|imag| over t"); });
  return Finish(LemmaId::kRealValued, n, w, tol);
}

absl::StatusOr<LemmaReport> CheckClosedForm(int n, double tol) {
  auto dft = GroupAlgebraFactorsByDft(n);
  if (!dft.ok()) return dft.status();
  Worst w;
  for (int t = -n; t < n; ++t) {
    auto closed = GroupAlgebraCoefficient(n, t);
    if (!closed.ok()) return closed.status();
    w.Update(std::fabs(*closed - CoefficientAt(*dft, t)), [&] { return absl::StrCat("t=", t); });
  }
  return Finish(LemmaId::kClosedForm, n, w, tol);
}

absl::StatusOr<LemmaReport> CheckMonotone(int n, double tol) {
  auto b = GroupAlgebraFactorsByDft(n);
  if (!b.ok()) return b.status();
  Worst w;
  for (int t = -n; t < 0; ++t) {
    w.Update(CoefficientAt(*b, t) - CoefficientAt(*b, t + 1),
             [&] { return absl::StrCat("increasing at t=", t); });
  }
  for (int t = 0; t + 1 < n; ++t) {
    w.Update(CoefficientAt(*b, t + 1) - CoefficientAt(*b, t),
             [&] { return absl::StrCat("decreasing at t=", t); });
  }
  return Finish(LemmaId::kMonotone, n, w, tol);
}

absl::StatusOr<LemmaReport> CheckValueBounds(int n, double tol) {
  auto b = GroupAlgebraFactorsByDft(n);
  if (!b.ok()) return b.status();
  const double rn = std::sqrt(static_cast<double>(n));
  const double n32 = n * rn;
  Worst w;
  for (int t = -n; t < n; ++t) {
    const double core =
        (InverseSqrtCoefficient(t) - InverseSqrtCoefficient(t + n)) / std::numbers::sqrt2;
    const double lower = core + 4.0 / (7.0 * rn) - 1.0 / (8.0 * n32);
    const double upper = core + 6.0 / (7.0 * rn) + 3.0 / (8.0 * n32);
    const double v = CoefficientAt(*b, t);
    w.Update(lower - v, [&] { return absl::StrCat("lower at t=", t); });
    w.Update(v - upper, [&] { return absl::StrCat("upper at t=", t); });
  }
  return Finish(LemmaId::kValueBounds, n, w, tol);
}

absl::StatusOr<LemmaReport> CheckLastRow(int n, double tol) {
  auto b = GroupAlgebraFactorsByDft(n);
  if (!b.ok()) return b.status();
  std::vector<double> last(2 * n);
  for (int j = 0; j < 2 * n; ++j) last[j] = b->At(j - (n - 1));
  Worst w;
  for (int j = 0; j < n; ++j) {
    w.Update(-last[j], [&] { return absl::StrCat("positivity at j=", j); });
    w.Update(last[j] - 1.0, [&] { return absl::StrCat("<=1 at j=", j); });
    if (j > 0) {
      w.Update(last[j - 1] - last[j], [&] { return absl::StrCat("nondecreasing at j=", j); });
    }
  }
  for (int j = n; j < 2 * n; ++j) {
    w.Update(std::fabs(last[j]) - 1.0, [&] { return absl::StrCat("range at j=", j); });
    if (j > n) {
      w.Update(last[j] - last[j - 1], [&] { return absl::StrCat("nonincreasing at j=", j); });
    }
  }
  return Finish(LemmaId::kLastRow, n, w, tol);
}

absl::StatusOr<LemmaReport> CheckSquareRoot(int n, double tol) {
  auto d = MakeDense(n);
  if (!d.ok()) return d.status();
  const DenseMatrix c = BuildC(n);
  const DenseMatrix e = AllOnes(n);
  const DenseMatrix target = 2.0 * DenseMatrix::PrefixSum(n) - e;
  Worst w;
  auto c2 = Multiply(c, c);
  if (!c2.ok()) return c2.status();
  w.Update(FrobeniusDistance(*c2, target), [] { return std::string("||C^2-(2M-E)||_F"); });

  const DenseMatrix i_minus_a = DenseMatrix::Identity(n) - NegacyclicShift(n);
  auto twice_identity = Multiply(target, i_minus_a);
  if (!twice_identity.ok()) return twice_identity.status();
  w.Update(MaxAbsDifference(*twice_identity, 2.0 * DenseMatrix::Identity(n)),
           [] { return std::string("(2M-E)(I-A)=2I"); });

  DenseMatrix offset = (0.5 / std::sqrt(static_cast<double>(n))) * e;
  w.Update(MaxAbsDifference(d->l.Block(0, 0, n, n), offset + 0.5 * c),
           [] { return std::string("L_1=E/(2sqrt n)+C/2"); });
  w.Update(MaxAbsDifference(d->l.Block(0, n, n, n), offset - 0.5 * c),
           [] { return std::string("L_2=E/(2sqrt n)-C/2"); });
  return Finish(LemmaId::kSquareRoot, n, w, tol);
}

absl::StatusOr<LemmaReport> CheckNormFormula(int n, double tol) {
  auto d = MakeDense(n);
  if (!d.ok()) return d.status();
  const double formula = MaxRowNormSquaredFormula(n);
  const NormReport l = ExactNorms(d->l);
  const NormReport r = ExactNorms(d->r);
  Worst w;
  w.Update(std::fabs(l.max_row_sq - formula), [] { return std::string("||L||^2_{2->inf}"); });
  w.Update(std::fabs(r.max_col_sq - formula), [] { return std::string("||R||^2_{1->2}"); });
  // Equality at n = 1 (1 + ln 1 / pi = 1).
  w.Update(formula - LogErrorBound(n), [] { return std::string("1+ln(n)/pi bound"); });
  return Finish(LemmaId::kNormFormula, n, w, tol);
}

absl::StatusOr<LemmaReport> CheckBinning(int n, double tol) {
  if (n == 1) return NotApplicable(LemmaId::kBinning, n, "n=1 is not binned");
  auto d = MakeDense(n);
  if (!d.ok()) return d.status();
  auto pair = Perturb(*d, kBinningZeta);
  if (!pair.ok()) return pair.status();
  const auto& p = pair->params;
  const double bound = BinCountBound(p.eta, p.mu);
  const SplitSummary& s = pair->binned.split();
  Worst w;
  w.Update(s.increasing_bins - bound, [] { return std::string("bins in increasing part"); });
  w.Update(s.positive_bins - bound, [] { return std::string("bins in positive part"); });
  w.Update(s.negative_bins - bound, [] { return std::string("bins in negative part"); });
  auto v = ValidatePerturbation(d->l, pair->l_hat, p.eta, p.mu);
  if (!v.ok()) return v.status();
  w.Update(v->max_violation,
           [&] { return absl::StrCat("perturbation at row=", v->row, ",col=", v->col); });
  return Finish(LemmaId::kBinning, n, w, tol,
                absl::StrCat("segments=", pair->binned.segment_count()));
}

absl::StatusOr<LemmaReport> CheckPerturbation(int n, double tol) {
  if (n == 1) return NotApplicable(LemmaId::kPerturbation, n, "L_2 singular at n=1");
  auto d = MakeDense(n);
  if (!d.ok()) return d.status();
  const NormReport l_norms = ExactNorms(d->l);
  const NormReport r_norms = ExactNorms(d->r);
  Worst w;
  for (double zeta : kZetaGrid) {
    auto pair = Perturb(*d, zeta);
    if (!pair.ok()) return pair.status();
    const auto& p = pair->params;
    const auto tag = [&](std::string_view what) { return absl::StrCat(std::string(what), "@zeta=", zeta); };
    w.Update(pair->perturbed.mean_se / pair->base.mean_se - (1.0 + zeta),
             [&] { return tag("MeanSE ratio"); });
    w.Update(pair->perturbed.max_se / pair->base.max_se - (1.0 + zeta),
             [&] { return tag("MaxSE ratio"); });

    const NormReport lh = ExactNorms(pair->l_hat);
    w.Update(std::sqrt(lh.frob_sq) - ((1 + p.eta) * std::sqrt(l_norms.frob_sq) +
                                      p.mu * n * std::numbers::sqrt2),
             [&] { return tag("||Lhat||_F"); });
    w.Update(std::sqrt(lh.max_row_sq) - ((1 + p.eta) * std::sqrt(l_norms.max_row_sq) +
                                         p.mu * std::sqrt(2.0 * n)),
             [&] { return tag("||Lhat||_{2->inf}"); });

    double growth = 0.0;
    for (int block = 0; block < 2; ++block) {
      const DenseMatrix li = d->l.Block(0, block * n, n, n);
      const DenseMatrix pi = pair->l_hat.Block(0, block * n, n, n) - li;
      const double p_norm = SpectralNorm(pi);
      const double li_frob = std::sqrt(kernels::SumSquares(li.data()));
      w.Update(p_norm - (p.eta * li_frob + p.mu * n),
               [&] { return tag(absl::StrCat("||P_", block + 1, "||_2")); });
      auto inv = InverseSpectralNorm(li);
      if (!inv.ok()) return inv.status();
      growth = std::max(growth, p_norm * *inv);
    }
    const double r_hat_col = std::sqrt(ExactNorms(pair->r_hat).max_col_sq);
    w.Update(r_hat_col - std::sqrt(r_norms.max_col_sq) * (1.0 + 2.0 * growth),
             [&] { return tag("||Rhat||_{1->2}"); });
  }
  return Finish(LemmaId::kPerturbation, n, w, tol);
}

absl::StatusOr<LemmaReport> CheckInverseNorm(int n, double tol) {
  if (n == 1) return NotApplicable(LemmaId::kInverseNorm, n, "L_2 singular at n=1");
  auto d = MakeDense(n);
  if (!d.ok()) return d.status();
  Worst w;
  double largest = 0.0;
  for (int block = 0; block < 2; ++block) {
    auto inv = InverseSpectralNorm(d->l.Block(0, block * n, n, n));
    if (!inv.ok()) return inv.status();
    largest = std::max(largest, *inv);
    w.Update(*inv - kProvenInverseNormBound,
             [&] { return absl::StrCat("||L_", block + 1, "^-1||_2=", *inv); });
  }
  auto c_inv = Inverse(BuildC(n));
  if (!c_inv.ok()) return c_inv.status();
  const double c_inv_norm = SpectralNorm(*c_inv);
  w.Update(c_inv_norm - 3.0, [&] { return absl::StrCat("||C^-1||_2=", c_inv_norm); });
  std::string extra = absl::StrCat("max_inv_norm=", largest);
  if (largest > kEmpiricalInverseNormBound) absl::StrAppend(&extra, ";exceeds_19");
  return Finish(LemmaId::kInverseNorm, n, w, tol, std::move(extra));
}

absl::StatusOr<LemmaReport> CheckMain(int n, double tol) {
  if (n == 1) return NotApplicable(LemmaId::kMain, n, "n=1 is not binned");
  auto d = MakeDense(n);
  if (!d.ok()) return d.status();
  Worst w;
  for (double zeta : kZetaGrid) {
    auto pair = Perturb(*d, zeta);
    if (!pair.ok()) return pair.status();
    const auto tag = [&](std::string_view what) { return absl::StrCat(std::string(what), "@zeta=", zeta); };
    w.Update(pair->perturbed.mean_se / pair->base.mean_se - (1.0 + zeta),
             [&] { return tag("MeanSE ratio"); });
    w.Update(pair->perturbed.max_se / pair->base.max_se - (1.0 + zeta),
             [&] { return tag("MaxSE ratio"); });
    const double bound = 3.0 * BinCountBound(pair->params.eta, pair->params.mu);
    w.Update(static_cast<double>(MaxRunsPerRow(pair->binned)) - bound,
             [&] { return tag("runs per row"); });
  }
  return Finish(LemmaId::kMain, n, w, tol);
}

absl::StatusOr<LemmaReport> CheckPartialSum(int n, double tol) {
  const CoeffSeq tilde = SqrtCoefficients(n);
  const CoeffSeq f = InverseSqrtCoefficients(n);
  double sum = 0.0;
  for (double v : tilde.values) sum += v;
  Worst w;
  w.Update(std::fabs(sum - f.values[n]), [] { return std::string("|sum ftilde - f_n|"); });
  return Finish(LemmaId::kPartialSum, n, w, tol);
}

absl::StatusOr<LemmaReport> CheckQuadraticForm(int n, double tol) {
  if (n == 1) return NotApplicable(LemmaId::kQuadraticForm, n, "stated for n>=2");
  const ToeplitzInverse inv = ComputeToeplitzInverse(n);
  const double form = inv.QuadraticForm();
  Worst w;
  w.Update(1.02 * std::sqrt(static_cast<double>(n)) - form,
           [] { return std::string("1.02 sqrt(n) - e^T C^-1 e"); });
  w.Update(inv.reconstruction_error, [] { return std::string("C*C^-1=I"); });
  return Finish(LemmaId::kQuadraticForm, n, w, tol, absl::StrCat("eCe=", form));
}

}  // namespace

std::span<const LemmaId> AllLemmas() { return kAll; }

std::string_view LemmaTag(LemmaId id) {
  switch (id) {
    case LemmaId::kRealValued: return "L1";
    case LemmaId::kClosedForm: return "L2";
    case LemmaId::kMonotone: return "L3";
    case LemmaId::kValueBounds: return "L4";
    case LemmaId::kLastRow: return "L5";
    case LemmaId::kSquareRoot: return "L6";
    case LemmaId::kNormFormula: return "L7";
    case LemmaId::kBinning: return "BIN";
    case LemmaId::kPerturbation: return "PERT";
    case LemmaId::kInverseNorm: return "INV";
    case LemmaId::kMain: return "MAIN";
    case LemmaId::kPartialSum: return "F0";
    case LemmaId::kQuadraticForm: return "F3";
  }
  return "?";
}

absl::StatusOr<LemmaId> ParseLemmaTag(std::string_view tag) {
  for (LemmaId id : kAll) {
    if (LemmaTag(id) == tag) return id;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown lemma id '", std::string(tag), "'"));
}

absl::StatusOr<LemmaReport> Check(LemmaId id, int n, double tolerance) {
  if (n < 1) return absl::InvalidArgumentError(absl::StrCat("n must be >= 1, got ", n));
  switch (id) {
    case LemmaId::kRealValued: return CheckRealValued(n, tolerance);
    case LemmaId::kClosedForm: return CheckClosedForm(n, tolerance);
    case LemmaId::kMonotone: return CheckMonotone(n, tolerance);
    case LemmaId::kValueBounds: return CheckValueBounds(n, tolerance);
    case LemmaId::kLastRow: return CheckLastRow(n, tolerance);
    case LemmaId::kSquareRoot: return CheckSquareRoot(n, tolerance);
    case LemmaId::kNormFormula: return CheckNormFormula(n, tolerance);
    case LemmaId::kBinning: return CheckBinning(n, tolerance);
    case LemmaId::kPerturbation: return CheckPerturbation(n, tolerance);
    case LemmaId::kInverseNorm: return CheckInverseNorm(n, tolerance);
    case LemmaId::kMain: return CheckMain(n, tolerance);
    case LemmaId::kPartialSum: return CheckPartialSum(n, tolerance);
    case LemmaId::kQuadraticForm: return CheckQuadraticForm(n, tolerance);
  }
  return absl::InvalidArgumentError("unknown lemma id");
}

absl::StatusOr<std::vector<LemmaReport>> RunGrid(std::span<const LemmaId> ids,
                                                 std::span<const int> ns,
                                                 double tolerance) {
  std::vector<std::future<absl::StatusOr<LemmaReport>>> jobs;
  for (int n : ns) {
    for (LemmaId id : ids) {
      jobs.push_back(std::async(std::launch::async,
                                [=] { return Check(id, n, tolerance); }));
    }
  }
  std::vector<LemmaReport> out;
  absl::Status first_error;
  for (auto& job : jobs) {
    auto r = job.get();
    if (!r.ok()) {
      if (first_error.ok()) first_error = r.status();
      continue;
    }
    out.push_back(*std::move(r));
  }
  if (!first_error.ok()) return first_error;
  return out;
}

std::string FormatReportCsv(const LemmaReport& r) {
  char margin[40];
  std::snprintf(margin, sizeof(margin), "%.17g", r.worst_margin);
  return absl::StrCat(std::string(LemmaTag(r.id)), ",", r.n, ",", r.passed ? "true" : "false", ",",
                      margin, ",", r.witness);
}

DenseMatrix ToeplitzInverse::Materialize() const {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = At(i - j);
  }
  return m;
}

double ToeplitzInverse::QuadraticForm() const {
  double sum = 0.0;
  for (int t = -n + 1; t < n; ++t) sum += (n - std::abs(t)) * At(t);
  return sum;
}

ToeplitzInverse ComputeToeplitzInverse(int n) {
  ToeplitzInverse inv;
  inv.n = n;
  inv.q.resize(2 * n - 1);
  for (int t = -n + 1; t < n; ++t) {
    inv.q[t + n - 1] = AlternatingSqrtSeries(n, t) / std::numbers::sqrt2;
  }
  auto product = Multiply(BuildC(n), inv.Materialize());
  inv.reconstruction_error =
      product.ok() ? MaxAbsDifference(*product, DenseMatrix::Identity(n))
                   : std::numeric_limits<double>::infinity();
  return inv;
}

}  // namespace gabin
