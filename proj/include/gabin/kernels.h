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
#ifndef GABIN_KERNELS_H_
#define GABIN_KERNELS_H_

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops shared by the dense verification path and the
// streaming mechanism. Every kernel has a portable scalar reference
// implementation and, on x86-64, an AVX2/FMA variant. The variant is chosen
// once at startup from CPUID; GABIN_ISA=scalar in the environment forces the
// reference path.

namespace gabin {
namespace kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);

// True if `isa` is compiled in and supported by the running CPU.
bool IsaAvailable(Isa isa);

// The instruction set currently used by the dispatching entry points below.
Isa ActiveIsa();

// Overrides dispatch (tests and benchmarks). Returns false and leaves the
// selection unchanged if `isa` is unavailable.
bool ForceIsa(Isa isa);

struct MaxLocation {
  double value;
  std::size_t index;
};

// Sum_i a[i] * b[i]. Sizes must match.
double Dot(std::span<const double> a, std::span<const double> b);

// Sum_i a[i]^2.
double SumSquares(std::span<const double> a);

// Sum_i (a[i] - b[i])^2.
double SquaredDistance(std::span<const double> a, std::span<const double> b);

// y[i] += alpha * x[i].
void Axpy(double alpha, std::span<const double> x, std::span<double> y);

// max_i |perturbed[i] - base[i]| - eta * |base[i]| - mu, with the first index
// attaining it. Empty input yields {-inf, 0}.
MaxLocation MaxPerturbationExcess(std::span<const double> base,
                                  std::span<const double> perturbed,
                                  double eta, double mu);

// Fixed-ISA entry points, used by the equivalence tests.
namespace scalar {
double Dot(const double* a, const double* b, std::size_t n);
double SumSquares(const double* a, std::size_t n);
double SquaredDistance(const double* a, const double* b, std::size_t n);
void Axpy(double alpha, const double* x, double* y, std::size_t n);
MaxLocation MaxPerturbationExcess(const double* base, const double* perturbed,
                                  std::size_t n, double eta, double mu);
}  // namespace scalar

namespace avx2 {
double Dot(const double* a, const double* b, std::size_t n);
double SumSquares(const double* a, std::size_t n);
double SquaredDistance(const double* a, const double* b, std::size_t n);
void Axpy(double alpha, const double* x, double* y, std::size_t n);
MaxLocation MaxPerturbationExcess(const double* base, const double* perturbed,
                                  std::size_t n, double eta, double mu);
}  // namespace avx2

}  // namespace kernels
}  // namespace gabin

#endif  // GABIN_KERNELS_H_
