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
#include "gabin/binning.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "gabin/kernels.h"
#include "gabin/linalg.h"
#include "json.hpp"

namespace gabin {
namespace {

// Slack for round-off in monotonicity and the <= 1 precondition.
constexpr double kOrderSlack = 1e-12;
constexpr int kFormatVersion = 1;

std::string_view ModeName(PerturbationMode mode) {
  return mode == PerturbationMode::kExact ? "exact" : "bound";
}

// Maps bins of a reversed run back onto positions [offset, offset + len),
// optionally negating values; returns them in increasing position order.
void AppendReversed(const BinnedRow& bins, int offset, int len, bool negate,
                    std::vector<Segment>& out) {
  const auto segs = bins.segments();
  for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
    out.push_back({offset + (len - 1 - it->end), offset + (len - 1 - it->start),
                   negate ? -it->value : it->value});
  }
}

}  // namespace

absl::StatusOr<BinnedRow> BinnedRow::Create(std::vector<Segment> segments, int domain_len) {
  if (domain_len <= 0) return absl::InvalidArgumentError("empty binned row domain");
  int next = 0;
  for (const Segment& s : segments) {
    if (s.start != next || s.end < s.start) {
      return absl::InvalidArgumentError(absl::StrCat(
          "segments do not tile the domain at index ", next, " (got [", s.start,
          ", ", s.end, "])"));
    }
    next = s.end + 1;
  }
  if (next != domain_len) {
    return absl::InvalidArgumentError(
        absl::StrCat("segments cover [0, ", next, ") but domain is [0, ", domain_len, ")"));
  }
  return BinnedRow(std::move(segments), domain_len);
}

double BinnedRow::Value(int j) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), j,
                             [](int idx, const Segment& s) { return idx < s.start; });
  return std::prev(it)->value;
}

std::vector<double> BinnedRow::Dense() const {
  std::vector<double> out(domain_len_);
  for (const Segment& s : segments_) {
    std::fill(out.begin() + s.start, out.begin() + s.end + 1, s.value);
  }
  return out;
}

double BinCountBound(double eta, double mu) {
  return std::log(1.0 / mu) / std::log1p(2.0 * eta) + 1.0;
}

absl::StatusOr<BinnedRow> BinDecreasing(std::span<const double> seq, double eta, double mu) {
  if (seq.empty()) return absl::InvalidArgumentError("cannot bin an empty sequence");
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    return absl::InvalidArgumentError(absl::StrCat("eta must be > 0, got ", eta));
  }
  if (!(mu > 0.0 && mu <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat("mu must be in (0, 1], got ", mu));
  }
  if (seq[0] > 1.0 + kOrderSlack) {
    return absl::InvalidArgumentError(absl::StrCat("leading value ", seq[0], " exceeds 1"));
  }
  const int m = static_cast<int>(seq.size());
  for (int i = 0; i < m; ++i) {
    if (!(seq[i] >= 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrCat("value ", seq[i], " at index ", i, " is negative"));
    }
    if (i > 0 && seq[i] > seq[i - 1] + kOrderSlack) {
      return absl::InvalidArgumentError(
          absl::StrCat("sequence increases at index ", i));
    }
  }

  int tail = 0;
  while (tail < m && seq[tail] >= mu) ++tail;

  std::vector<Segment> segments;
  for (int head = 0; head < tail;) {
    const double floor = seq[head] / (1.0 + 2.0 * eta);
    int last = head;
    while (last + 1 < tail && seq[last + 1] >= floor) ++last;
    segments.push_back({head, last, 0.5 * (seq[head] + seq[last])});
    head = last + 1;
  }
  if (tail < m) segments.push_back({tail, m - 1, 0.5 * (seq[tail] + seq[m - 1])});
  return BinnedRow::Create(std::move(segments), m);
}

absl::StatusOr<PerturbationParams> PerturbationParams::FromNorms(
    int n, double zeta, double psi, double chi, PerturbationMode mode) {
  if (!(zeta > 0.0 && zeta <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat("zeta must be in (0, 1], got ", zeta));
  }
  if (n < 1 || !(psi > 0.0) || !(chi > 0.0)) {
    return absl::InvalidArgumentError("n, psi and chi must be positive");
  }
  PerturbationParams p;
  p.n = n;
  p.zeta = zeta;
  p.psi_L = psi;
  p.chi_L = chi;
  p.eta = zeta / (17.0 * psi);
  p.mu = zeta / (17.0 * n * chi);
  p.mode = mode;
  return p;
}

absl::StatusOr<PerturbationParams> ComputePerturbationParams(
    const GroupAlgebraFactors& factors, double zeta, const PerturbationOptions& options) {
  const int n = factors.n;
  if (options.mode == PerturbationMode::kBound) {
    const double chi = options.empirical_inverse_bound ? kEmpiricalInverseNormBound
                                                       : kProvenInverseNormBound;
    const double frob = std::sqrt(n * MaxRowNormSquaredFormula(n));
    return PerturbationParams::FromNorms(n, zeta, frob * chi, chi, options.mode);
  }

  auto l = MaterializeL(factors, options.dense_limit);
  if (!l.ok()) return l.status();
  double psi = 0.0;
  double chi = 0.0;
  for (int block = 0; block < 2; ++block) {
    const DenseMatrix li = l->Block(0, block * n, n, n);
    auto inv_norm = InverseSpectralNorm(li);
    if (!inv_norm.ok()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "L_", block + 1, " is singular for n = ", n, ": ", inv_norm.status().message()));
    }
    const double frob = std::sqrt(kernels::SumSquares(li.data()));
    psi = std::max(psi, frob * *inv_norm);
    chi = std::max(chi, *inv_norm);
  }
  return PerturbationParams::FromNorms(n, zeta, psi, chi, options.mode);
}

double BinnedFactor::Value(int row, int col) const {
  const int len = 2 * n_;
  return last_row_.Value((col + Shift(row)) % len);
}

std::vector<double> BinnedFactor::DenseRow(int row) const {
  const std::vector<double> last = last_row_.Dense();
  const int len = 2 * n_;
  std::vector<double> out(len);
  const int shift = Shift(row);
  for (int j = 0; j < len; ++j) out[j] = last[(j + shift) % len];
  return out;
}

DenseMatrix BinnedFactor::Materialize() const {
  DenseMatrix out(n_, 2 * n_);
  for (int i = 0; i < n_; ++i) {
    const auto row = DenseRow(i);
    std::copy(row.begin(), row.end(), out.row(i).begin());
  }
  return out;
}

absl::StatusOr<BinnedFactor> BinFactor(const GroupAlgebraFactors& factors,
                                       const PerturbationParams& params) {
  const int n = factors.n;
  if (n < 1) return absl::InvalidArgumentError("n must be >= 1");
  std::vector<double> last(2 * n);
  for (int j = 0; j < 2 * n; ++j) last[j] = factors.At(j - (n - 1));

  SplitSummary split;
  std::vector<Segment> segments;
  if (n == 1) {
    split.skipped = true;
    segments = {{0, 0, last[0]}, {1, 1, last[1]}};
    auto row = BinnedRow::Create(std::move(segments), 2);
    if (!row.ok()) return row.status();
    return BinnedFactor(n, *std::move(row), params, split);
  }

  // Increasing first half, binned right to left.
  std::vector<double> run(last.rbegin() + n, last.rend());
  auto first = BinDecreasing(run, params.eta, params.mu);
  if (!first.ok()) return first.status();
  AppendReversed(*first, 0, n, /*negate=*/false, segments);
  split.increasing_bins = static_cast<int>(first->size());

  // Second half: nonnegative decreasing prefix, then negative suffix.
  const auto second = std::span<const double>(last).subspan(n);
  const int positive = static_cast<int>(
      std::find_if(second.begin(), second.end(), [](double v) { return v < 0.0; }) -
      second.begin());
  if (positive > 0) {
    auto bins = BinDecreasing(second.first(positive), params.eta, params.mu);
    if (!bins.ok()) return bins.status();
    for (const Segment& s : bins->segments()) {
      segments.push_back({n + s.start, n + s.end, s.value});
    }
    split.positive_bins = static_cast<int>(bins->size());
  }
  if (positive < n) {
    run.clear();
    for (int j = n - 1; j >= positive; --j) run.push_back(std::max(-second[j], 0.0));
    auto bins = BinDecreasing(run, params.eta, params.mu);
    if (!bins.ok()) return bins.status();
    AppendReversed(*bins, n + positive, n - positive, /*negate=*/true, segments);
    split.negative_bins = static_cast<int>(bins->size());
  }

  auto row = BinnedRow::Create(std::move(segments), 2 * n);
  if (!row.ok()) return row.status();
  return BinnedFactor(n, *std::move(row), params, split);
}

absl::StatusOr<DenseMatrix> BuildRHat(const DenseMatrix& l, const DenseMatrix& l_hat,
                                      const DenseMatrix& r, double min_rcond) {
  const std::size_t n = l.rows();
  if (l.cols() != 2 * n || l_hat.rows() != n || l_hat.cols() != 2 * n ||
      r.rows() != 2 * n || r.cols() != n) {
    return absl::InvalidArgumentError("BuildRHat expects n x 2n, n x 2n, 2n x n");
  }
  DenseMatrix blocks[2];
  for (std::size_t b = 0; b < 2; ++b) {
    auto target = Multiply(l.Block(0, b * n, n, n), r.Block(b * n, 0, n, n));
    if (!target.ok()) return target.status();
    auto solved = Solve(l_hat.Block(0, b * n, n, n), *target, min_rcond);
    if (!solved.ok()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "L-hat_", b + 1, " cannot be inverted: ", solved.status().message()));
    }
    blocks[b] = *std::move(solved);
  }
  return VStack(blocks[0], blocks[1]);
}

absl::StatusOr<PerturbationViolation> ValidatePerturbation(const DenseMatrix& l,
                                                           const DenseMatrix& l_hat,
                                                           double eta, double mu) {
  if (l.rows() != l_hat.rows() || l.cols() != l_hat.cols() || l.cols() == 0) {
    return absl::InvalidArgumentError("ValidatePerturbation: shapes differ");
  }
  const auto worst = kernels::MaxPerturbationExcess(l.data(), l_hat.data(), eta, mu);
  return PerturbationViolation{worst.value, worst.index / l.cols(), worst.index % l.cols()};
}

std::string SerializeBinnedFactor(const BinnedFactor& factor) {
  const PerturbationParams& p = factor.params();
  nlohmann::json segs = nlohmann::json::array();
  for (const Segment& s : factor.last_row().segments()) {
    segs.push_back({s.start, s.end, s.value});
  }
  nlohmann::json doc = {
      {"format", "gabin.binned_factor"},
      {"version", kFormatVersion},
      {"n", factor.n()},
      {"zeta", p.zeta},
      {"eta", p.eta},
      {"mu", p.mu},
      {"psi_L", p.psi_L},
      {"chi_L", p.chi_L},
      {"mode", ModeName(p.mode)},
      {"skipped", factor.split().skipped},
      {"parts", {factor.split().increasing_bins, factor.split().positive_bins,
                 factor.split().negative_bins}},
      {"segments", std::move(segs)},
  };
  return doc.dump();
}

absl::StatusOr<BinnedFactor> ParseBinnedFactor(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("format") != "gabin.binned_factor") {
      return absl::InvalidArgumentError("not a binned factor document");
    }
    if (doc.at("version").get<int>() != kFormatVersion) {
      return absl::InvalidArgumentError(
          absl::StrCat("unsupported version ", doc.at("version").dump()));
    }
    PerturbationParams p;
    p.n = doc.at("n").get<int>();
    p.zeta = doc.at("zeta").get<double>();
    p.eta = doc.at("eta").get<double>();
    p.mu = doc.at("mu").get<double>();
    p.psi_L = doc.at("psi_L").get<double>();
    p.chi_L = doc.at("chi_L").get<double>();
    const std::string mode = doc.at("mode").get<std::string>();
    if (mode != "exact" && mode != "bound") {
      return absl::InvalidArgumentError(absl::StrCat("unknown mode ", mode));
    }
    p.mode = mode == "exact" ? PerturbationMode::kExact : PerturbationMode::kBound;
    if (p.n < 1) return absl::InvalidArgumentError("n must be >= 1");

    SplitSummary split;
    split.skipped = doc.at("skipped").get<bool>();
    const auto& parts = doc.at("parts");
    split.increasing_bins = parts.at(0).get<int>();
    split.positive_bins = parts.at(1).get<int>();
    split.negative_bins = parts.at(2).get<int>();

    std::vector<Segment> segments;
    for (const auto& s : doc.at("segments")) {
      segments.push_back({s.at(0).get<int>(), s.at(1).get<int>(), s.at(2).get<double>()});
    }
    auto row = BinnedRow::Create(std::move(segments), 2 * p.n);
    if (!row.ok()) return row.status();
    return BinnedFactor(p.n, *std::move(row), p, split);
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("malformed binned factor: ", e.what()));
  }
}

}  // namespace gabin
