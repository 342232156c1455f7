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
// gabin: verification, factor export, binning, streaming and sweeps.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "gabin/binning.h"
#include "gabin/coeffs.h"
#include "gabin/factorization.h"
#include "gabin/kernels.h"
#include "gabin/streaming.h"
#include "gabin/verify.h"

namespace gabin {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitOracle = 2;

std::string Real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int Fail(std::string_view flag, const absl::Status& status) {
  std::cerr << "gabin: " << flag << ": " << status.message() << "\n";
  return kExitUsage;
}

// Output sink: the named file, or stdout when the path is empty.
class Output {
 public:
  absl::Status Open(const std::string& path) {
    if (path.empty()) return absl::OkStatus();
    file_.open(path, std::ios::out | std::ios::trunc);
    if (!file_) return absl::InvalidArgumentError(absl::StrCat("cannot open ", path));
    return absl::OkStatus();
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

absl::StatusOr<std::vector<double>> ReadInputs(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::InvalidArgumentError(absl::StrCat("cannot open ", path));
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", line_no, ": not a finite decimal real"));
    }
    values.push_back(v);
  }
  return values;
}

const std::map<std::string, PerturbationMode> kModes = {
    {"exact", PerturbationMode::kExact}, {"bound", PerturbationMode::kBound}};
const std::map<std::string, NoiseMode> kNoiseModes = {
    {"reference", NoiseMode::kReference}, {"streaming", NoiseMode::kStreaming}};
const std::map<std::string, SensitivityMode> kSensitivityModes = {
    {"exact", SensitivityMode::kExactRHat}, {"bound", SensitivityMode::kNormBound}};

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::vector<int> n_grid;
  std::vector<std::string> lemmas;
  double tol = 1e-9;
  std::string out;
};

int RunVerify(const VerifyArgs& args) {
  std::vector<LemmaId> ids;
  for (const auto& tag : args.lemmas) {
    auto id = ParseLemmaTag(tag);
    if (!id.ok()) return Fail("--lemma", id.status());
    ids.push_back(*id);
  }
  if (ids.empty()) ids.assign(AllLemmas().begin(), AllLemmas().end());
  for (int n : args.n_grid) {
    if (n < 1) return Fail("--n-grid", absl::InvalidArgumentError("every n must be >= 1"));
  }
  Output out;
  if (auto s = out.Open(args.out); !s.ok()) return Fail("--out", s);
  auto reports = RunGrid(ids, args.n_grid, args.tol);
  if (!reports.ok()) return Fail("--n-grid", reports.status());
  bool all_passed = true;
  out.stream() << "lemma_id,n,passed,worst_margin,witness\n";
  for (const auto& r : *reports) {
    out.stream() << FormatReportCsv(r) << "\n";
    all_passed = all_passed && r.passed;
  }
  out.stream().flush();
  return all_passed ? kExitOk : kExitOracle;
}

// ---------------------------------------------------------------- factor

struct FactorArgs {
  int n = 0;
  std::string dump;
  std::string dump_r;
  std::size_t dense_limit = kDefaultDenseLimit;
};

int RunFactor(const FactorArgs& args) {
  auto factors = GroupAlgebraFactorsByDft(args.n);
  if (!factors.ok()) return Fail("--n", factors.status());
  const double formula = MaxRowNormSquaredFormula(args.n);
  NormReport l_norms;
  NormReport r_norms;
  const bool dense = static_cast<std::size_t>(args.n) <= args.dense_limit;
  if (dense) {
    auto l = MaterializeL(*factors, args.dense_limit);
    auto r = MaterializeR(*factors, args.dense_limit);
    if (!l.ok()) return Fail("--n", l.status());
    if (!r.ok()) return Fail("--n", r.status());
    l_norms = ExactNorms(*l);
    r_norms = ExactNorms(*r);
    if (!args.dump.empty()) {
      std::ofstream f(args.dump);
      if (!f) return Fail("--dump", absl::InvalidArgumentError("cannot open " + args.dump));
      WriteCsv(*l, f);
    }
    if (!args.dump_r.empty()) {
      std::ofstream f(args.dump_r);
      if (!f) return Fail("--dump-r", absl::InvalidArgumentError("cannot open " + args.dump_r));
      WriteCsv(*r, f);
    }
  } else {
    if (!args.dump.empty() || !args.dump_r.empty()) {
      return Fail("--dump", absl::ResourceExhaustedError(
                                absl::StrCat("n exceeds --dense-limit ", args.dense_limit)));
    }
    // Every row of L and column of R is a cyclic shift of b.
    const ErrorMetrics m = GroupAlgebraErrorMetrics(*factors);
    l_norms.max_row_sq = m.max_se;
    r_norms.max_col_sq = m.max_se;
    l_norms.frob_sq = m.max_se * args.n;
  }
  const bool agree = std::fabs(l_norms.max_row_sq - formula) < 1e-9 &&
                     std::fabs(r_norms.max_col_sq - formula) < 1e-9;
  std::cout << "# gabin factor n=" << args.n << " path=" << (dense ? "dense" : "circulant")
            << "\n";
  std::cout << "quantity,value\n";
  std::cout << "max_row_sq_L," << Real(l_norms.max_row_sq) << "\n";
  std::cout << "max_col_sq_R," << Real(r_norms.max_col_sq) << "\n";
  std::cout << "frob_sq_L," << Real(l_norms.frob_sq) << "\n";
  std::cout << "norm_formula," << Real(formula) << "\n";
  std::cout << "log_bound," << Real(LogErrorBound(args.n)) << "\n";
  std::cout << "max_imag_residue," << Real(factors->max_imag_residue) << "\n";
  std::cout << "agree," << (agree ? "true" : "false") << "\n";
  return agree ? kExitOk : kExitOracle;
}

// ---------------------------------------------------------------- bin

struct BinArgs {
  int n = 0;
  double zeta = 0.5;
  std::string mode = "bound";
  bool empirical_chi = false;
  std::string out;
  std::size_t dense_max = 1024;
};

int RunBin(const BinArgs& args) {
  auto factors = GroupAlgebraFactorsByDft(args.n);
  if (!factors.ok()) return Fail("--n", factors.status());
  PerturbationOptions options;
  options.mode = kModes.at(args.mode);
  options.empirical_inverse_bound = args.empirical_chi;
  options.dense_limit = args.dense_max;
  if (args.n == 1 && options.mode == PerturbationMode::kExact) {
    return Fail("--mode", absl::InvalidArgumentError("exact mode needs n >= 2 (L_2 is singular)"));
  }
  auto params = ComputePerturbationParams(*factors, args.zeta, options);
  if (!params.ok()) return Fail(args.mode == "exact" ? "--mode" : "--zeta", params.status());
  auto binned = BinFactor(*factors, *params);
  if (!binned.ok()) return Fail("--n", binned.status());
  const SplitSummary& s = binned->split();

  std::cout << "# gabin bin n=" << args.n << " zeta=" << Real(args.zeta)
            << " mode=" << args.mode << " empirical_chi=" << (args.empirical_chi ? 1 : 0)
            << "\n";
  std::cout << "quantity,value\n";
  std::cout << "eta," << Real(params->eta) << "\n";
  std::cout << "mu," << Real(params->mu) << "\n";
  std::cout << "psi_L," << Real(params->psi_L) << "\n";
  std::cout << "chi_L," << Real(params->chi_L) << "\n";
  std::cout << "segments," << binned->segment_count() << "\n";
  std::cout << "increasing_bins," << s.increasing_bins << "\n";
  std::cout << "positive_bins," << s.positive_bins << "\n";
  std::cout << "negative_bins," << s.negative_bins << "\n";
  std::cout << "nonempty_parts," << s.nonempty_parts() << "\n";
  std::cout << "bin_count_bound," << Real(BinCountBound(params->eta, params->mu)) << "\n";

  if (static_cast<std::size_t>(args.n) <= args.dense_max && !s.skipped) {
    auto l = MaterializeL(*factors, args.dense_max);
    auto r = MaterializeR(*factors, args.dense_max);
    if (!l.ok()) return Fail("--dense-max", l.status());
    if (!r.ok()) return Fail("--dense-max", r.status());
    const DenseMatrix l_hat = binned->Materialize();
    auto r_hat = BuildRHat(*l, l_hat, *r);
    if (!r_hat.ok()) return Fail("--n", r_hat.status());
    auto base = ComputeErrorMetrics(*l, *r);
    auto pert = ComputeErrorMetrics(l_hat, *r_hat);
    auto viol = ValidatePerturbation(*l, l_hat, params->eta, params->mu);
    if (!base.ok() || !pert.ok() || !viol.ok()) {
      return Fail("--n", absl::InternalError("dense error metrics failed"));
    }
    std::cout << "mean_se_ratio," << Real(pert->mean_se / base->mean_se) << "\n";
    std::cout << "max_se_ratio," << Real(pert->max_se / base->max_se) << "\n";
    std::cout << "perturbation_violation," << Real(viol->max_violation) << "\n";
  } else {
    std::cout << "# error ratios skipped: n above --dense-max or unbinned\n";
  }
  if (!args.out.empty()) {
    std::ofstream f(args.out);
    if (!f) return Fail("--out", absl::InvalidArgumentError("cannot open " + args.out));
    f << SerializeBinnedFactor(*binned) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- stream

struct StreamArgs {
  int n = 0;
  double zeta = 0.5;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  std::string input;
  std::string noise_mode = "streaming";
  std::string mode = "bound";
  std::string sensitivity = "bound";
  bool empirical_chi = false;
  bool truth = false;
  std::string out;
};

int RunStreamCommand(const StreamArgs& args) {
  auto inputs = ReadInputs(args.input);
  if (!inputs.ok()) return Fail("--input", inputs.status());
  if (inputs->size() > static_cast<std::size_t>(args.n)) {
    return Fail("--input", absl::InvalidArgumentError(absl::StrCat(
                               "stream has ", inputs->size(), " values but --n is ", args.n)));
  }
  MechanismConfig config;
  config.n = args.n;
  config.zeta = args.zeta;
  config.noise_multiplier = args.sigma;
  config.seed = args.seed;
  config.noise_mode = kNoiseModes.at(args.noise_mode);
  config.sensitivity_mode = kSensitivityModes.at(args.sensitivity);
  config.perturbation.mode = kModes.at(args.mode);
  config.perturbation.empirical_inverse_bound = args.empirical_chi;
  auto mech = Mechanism::Create(config);
  if (!mech.ok()) return Fail("--n", mech.status());

  Output out;
  if (auto s = out.Open(args.out); !s.ok()) return Fail("--out", s);
  std::ostream& os = out.stream();
  os << "# gabin stream n=" << args.n << " zeta=" << Real(args.zeta)
     << " sigma=" << Real(args.sigma) << " seed=" << args.seed
     << " noise_mode=" << args.noise_mode << " mode=" << args.mode
     << " sensitivity_mode=" << args.sensitivity
     << " empirical_chi=" << (args.empirical_chi ? 1 : 0)
     << " sensitivity=" << Real(mech->sensitivity()) << " segments=" << mech->segment_count()
     << "\n";
  os << (args.truth ? "step,estimate,true_sum,error\n" : "step,estimate\n");
  double true_sum = 0.0;
  for (std::size_t i = 0; i < inputs->size(); ++i) {
    auto estimate = mech->Step((*inputs)[i]);
    if (!estimate.ok()) return Fail("--input", estimate.status());
    true_sum += (*inputs)[i];
    os << i + 1 << "," << Real(*estimate);
    if (args.truth) os << "," << Real(true_sum) << "," << Real(*estimate - true_sum);
    os << "\n";
  }
  os.flush();
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::vector<int> n_list;
  double zeta = 0.5;
  std::string mode = "bound";
  bool empirical_chi = false;
  std::size_t dense_max = 512;
  std::string out;
};

struct SweepRow {
  int n = 0;
  ErrorMetrics base;
  std::optional<ErrorMetrics> binned;
  std::size_t segments = 0;
  double step_ns = 0.0;
};

absl::StatusOr<SweepRow> SweepPoint(int n, const SweepArgs& args) {
  SweepRow row;
  row.n = n;
  auto factors = GroupAlgebraFactorsByDft(n);
  if (!factors.ok()) return factors.status();
  row.base = GroupAlgebraErrorMetrics(*factors);
  PerturbationOptions options;
  options.mode = n == 1 ? PerturbationMode::kBound : kModes.at(args.mode);
  options.empirical_inverse_bound = args.empirical_chi;
  options.dense_limit = std::max<std::size_t>(args.dense_max, kDefaultDenseLimit);
  auto params = ComputePerturbationParams(*factors, args.zeta, options);
  if (!params.ok()) return params.status();
  auto binned = BinFactor(*factors, *params);
  if (!binned.ok()) return binned.status();
  row.segments = binned->segment_count();
  if (static_cast<std::size_t>(n) <= args.dense_max) {
    if (binned->split().skipped) {
      row.binned = row.base;
    } else {
      auto l = MaterializeL(*factors, args.dense_max);
      if (!l.ok()) return l.status();
      auto r = MaterializeR(*factors, args.dense_max);
      if (!r.ok()) return r.status();
      const DenseMatrix l_hat = binned->Materialize();
      auto r_hat = BuildRHat(*l, l_hat, *r);
      if (!r_hat.ok()) return r_hat.status();
      auto metrics = ComputeErrorMetrics(l_hat, *r_hat);
      if (!metrics.ok()) return metrics.status();
      row.binned = *metrics;
    }
  }
  return row;
}

// Mean wall time per Step over the first min(n, 256) steps.
absl::StatusOr<double> TimeSteps(int n, const SweepArgs& args) {
  MechanismConfig config;
  config.n = n;
  config.zeta = args.zeta;
  config.perturbation.mode = n == 1 ? PerturbationMode::kBound : kModes.at(args.mode);
  config.perturbation.empirical_inverse_bound = args.empirical_chi;
  auto mech = Mechanism::Create(config);
  if (!mech.ok()) return mech.status();
  const int steps = std::min(n, 256);
  double sink = 0.0;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < steps; ++i) {
    auto v = mech->Step(1.0);
    if (!v.ok()) return v.status();
    sink += *v;
  }
  const auto stop = std::chrono::steady_clock::now();
  if (!std::isfinite(sink)) return absl::InternalError("non-finite estimate");
  return std::chrono::duration<double, std::nano>(stop - start).count() / steps;
}

int RunSweep(const SweepArgs& args) {
  for (int n : args.n_list) {
    if (n < 1) return Fail("--n-list", absl::InvalidArgumentError("every n must be >= 1"));
  }
  if (args.mode == "exact") {
    for (int n : args.n_list) {
      if (n == 1 || static_cast<std::size_t>(n) > args.dense_max) {
        return Fail("--mode", absl::InvalidArgumentError(
                                  "exact mode needs 2 <= n <= --dense-max for every n"));
      }
    }
  }
  Output out;
  if (auto s = out.Open(args.out); !s.ok()) return Fail("--out", s);
  std::vector<std::future<absl::StatusOr<SweepRow>>> jobs;
  for (int n : args.n_list) {
    jobs.push_back(std::async(std::launch::async, [n, &args] { return SweepPoint(n, args); }));
  }
  std::vector<SweepRow> rows;
  for (auto& job : jobs) {
    auto row = job.get();
    if (!row.ok()) return Fail("--n-list", row.status());
    rows.push_back(*row);
  }
  // Timing runs sequentially so points do not compete for cores.
  for (auto& row : rows) {
    auto t = TimeSteps(row.n, args);
    if (!t.ok()) return Fail("--n-list", t.status());
    row.step_ns = *t;
  }
  std::ostream& os = out.stream();
  os << "# gabin sweep zeta=" << Real(args.zeta) << " mode=" << args.mode
     << " empirical_chi=" << (args.empirical_chi ? 1 : 0) << " dense_max=" << args.dense_max
     << " isa=" << kernels::IsaName(kernels::ActiveIsa()) << "\n";
  os << "n,mean_se,max_se,binned_mean_se,binned_max_se,segments,step_time_ns\n";
  for (const auto& row : rows) {
    os << row.n << "," << Real(row.base.mean_se) << "," << Real(row.base.max_se) << ","
       << (row.binned ? Real(row.binned->mean_se) : "") << ","
       << (row.binned ? Real(row.binned->max_se) : "") << "," << row.segments << ","
       << Real(row.step_ns) << "\n";
  }
  os.flush();
  return kExitOk;
}

}  // namespace
}  // namespace gabin

int main(int argc, char** argv) {
  using namespace gabin;
  CLI::App app{"gabin: binned group-algebra factorizations for private prefix sums"};
  app.require_subcommand(1);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the numerical oracle suite");
  verify_cmd->add_option("--n-grid", verify.n_grid, "Comma-separated n values")
      ->required()
      ->delimiter(',');
  verify_cmd->add_option("--lemma", verify.lemmas,
                         "Oracle id (L1..L7, BIN, PERT, INV, MAIN, F0, F3); repeatable")
      ->delimiter(',');
  verify_cmd->add_option("--tol", verify.tol, "Pass tolerance on the worst margin")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--out", verify.out, "Report CSV path (default stdout)");

  FactorArgs factor;
  auto* factor_cmd = app.add_subcommand("factor", "Build L, R and print their norms");
  factor_cmd->add_option("--n", factor.n, "Stream length")->required()->check(
      CLI::Range(1, 1 << 26));
  factor_cmd->add_option("--dump", factor.dump, "Write L as CSV");
  factor_cmd->add_option("--dump-r", factor.dump_r, "Write R as CSV");
  factor_cmd->add_option("--dense-limit", factor.dense_limit,
                         "Largest n with dense norms (circulant path above)");

  BinArgs bin;
  auto* bin_cmd = app.add_subcommand("bin", "Build the binned factor L-hat");
  bin_cmd->add_option("--n", bin.n, "Stream length")->required()->check(CLI::Range(1, 1 << 26));
  bin_cmd->add_option("--zeta", bin.zeta, "Error inflation budget in (0, 1]")
      ->check(CLI::Range(1e-300, 1.0));
  bin_cmd->add_option("--mode", bin.mode, "Perturbation parameters: exact|bound")
      ->check(CLI::IsMember({"exact", "bound"}));
  bin_cmd->add_flag("--empirical-chi", bin.empirical_chi,
                    "Bound mode: use ||L_i^-1||_2 <= 19 instead of 250");
  bin_cmd->add_option("--out", bin.out, "Write the binned factor as JSON");
  bin_cmd->add_option("--dense-max", bin.dense_max,
                      "Largest n for dense error ratios and exact mode");

  StreamArgs stream;
  auto* stream_cmd = app.add_subcommand("stream", "Run the streaming mechanism");
  stream_cmd->add_option("--n", stream.n, "Stream length")->required()->check(
      CLI::Range(1, 1 << 26));
  stream_cmd->add_option("--zeta", stream.zeta, "Error inflation budget in (0, 1]")
      ->check(CLI::Range(1e-300, 1.0));
  stream_cmd->add_option("--sigma", stream.sigma, "Noise multiplier (std = sigma * sensitivity)")
      ->check(CLI::NonNegativeNumber);
  stream_cmd->add_option("--seed", stream.seed, "Noise seed");
  stream_cmd->add_option("--input", stream.input, "Newline-delimited reals")
      ->required()
      ->check(CLI::ExistingFile);
  stream_cmd->add_option("--noise-mode", stream.noise_mode, "reference|streaming")
      ->check(CLI::IsMember({"reference", "streaming"}));
  stream_cmd->add_option("--mode", stream.mode, "Perturbation parameters: exact|bound")
      ->check(CLI::IsMember({"exact", "bound"}));
  stream_cmd->add_option("--sensitivity", stream.sensitivity,
                         "Sensitivity: exact (||R-hat||_{1->2}) | bound")
      ->check(CLI::IsMember({"exact", "bound"}));
  stream_cmd->add_flag("--empirical-chi", stream.empirical_chi,
                       "Bound mode: use ||L_i^-1||_2 <= 19 instead of 250");
  stream_cmd->add_flag("--truth", stream.truth, "Also print true_sum and error");
  stream_cmd->add_option("--out", stream.out, "Output CSV path (default stdout)");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Error, bin-count and step-time sweep");
  sweep_cmd->add_option("--n-list", sweep.n_list, "Comma-separated n values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--zeta", sweep.zeta, "Error inflation budget in (0, 1]")
      ->check(CLI::Range(1e-300, 1.0));
  sweep_cmd->add_option("--mode", sweep.mode, "Perturbation parameters: exact|bound")
      ->check(CLI::IsMember({"exact", "bound"}));
  sweep_cmd->add_flag("--empirical-chi", sweep.empirical_chi,
                      "Bound mode: use ||L_i^-1||_2 <= 19 instead of 250");
  sweep_cmd->add_option("--dense-max", sweep.dense_max,
                        "Largest n for dense binned error metrics");
  sweep_cmd->add_option("--out", sweep.out, "Output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "gabin: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  if (*verify_cmd) return RunVerify(verify);
  if (*factor_cmd) return RunFactor(factor);
  if (*bin_cmd) return RunBin(bin);
  if (*stream_cmd) return RunStreamCommand(stream);
  return RunSweep(sweep);
}
