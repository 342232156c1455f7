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
#include "gabin/kernels.h"

#include <atomic>
#include <cassert>
#include <cstdlib>
#include <string_view>

namespace gabin {
namespace kernels {
namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum_squares)(const double*, std::size_t);
  double (*squared_distance)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  MaxLocation (*max_excess)(const double*, const double*, std::size_t, double,
                            double);
};

constexpr Table kScalarTable{&scalar::Dot, &scalar::SumSquares,
                             &scalar::SquaredDistance, &scalar::Axpy,
                             &scalar::MaxPerturbationExcess};

#if defined(GABIN_HAVE_AVX2)
constexpr Table kAvx2Table{&avx2::Dot, &avx2::SumSquares,
                           &avx2::SquaredDistance, &avx2::Axpy,
                           &avx2::MaxPerturbationExcess};
#endif

const Table* TableFor(Isa isa) {
#if defined(GABIN_HAVE_AVX2)
  if (isa == Isa::kAvx2) return &kAvx2Table;
#endif
  (void)isa;
  return &kScalarTable;
}

Isa DetectIsa() {
  if (const char* env = std::getenv("GABIN_ISA")) {
    if (std::string_view(env) == "scalar") return Isa::kScalar;
  }
  return IsaAvailable(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& Selected() {
  static std::atomic<Isa> selected{DetectIsa()};
  return selected;
}

const Table& Active() { return *TableFor(Selected().load(std::memory_order_relaxed)); }

}  // namespace

#if !defined(GABIN_HAVE_AVX2)
// Stubs keep the fixed-ISA namespace linkable on targets without AVX2; they
// are unreachable because IsaAvailable(kAvx2) is false there.
namespace avx2 {
double Dot(const double* a, const double* b, std::size_t n) { return scalar::Dot(a, b, n); }
double SumSquares(const double* a, std::size_t n) { return scalar::SumSquares(a, n); }
double SquaredDistance(const double* a, const double* b, std::size_t n) {
  return scalar::SquaredDistance(a, b, n);
}
void Axpy(double alpha, const double* x, double* y, std::size_t n) { scalar::Axpy(alpha, x, y, n); }
MaxLocation MaxPerturbationExcess(const double* base, const double* perturbed,
                                  std::size_t n, double eta, double mu) {
  return scalar::MaxPerturbationExcess(base, perturbed, n, eta, mu);
}
}  // namespace avx2
#endif

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool IsaAvailable(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(GABIN_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa ActiveIsa() { return Selected().load(std::memory_order_relaxed); }

bool ForceIsa(Isa isa) {
  if (!IsaAvailable(isa)) return false;
  Selected().store(isa, std::memory_order_relaxed);
  return true;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return Active().dot(a.data(), b.data(), a.size());
}

double SumSquares(std::span<const double> a) {
  return Active().sum_squares(a.data(), a.size());
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return Active().squared_distance(a.data(), b.data(), a.size());
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  Active().axpy(alpha, x.data(), y.data(), x.size());
}

MaxLocation MaxPerturbationExcess(std::span<const double> base,
                                  std::span<const double> perturbed,
                                  double eta, double mu) {
  assert(base.size() == perturbed.size());
  return Active().max_excess(base.data(), perturbed.data(), base.size(), eta, mu);
}

}  // namespace kernels
}  // namespace gabin
