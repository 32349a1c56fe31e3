/*
 * Copyright 2026 The Engage Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ENGAGE_SIMD_KERNELS_HPP_
#define ENGAGE_SIMD_KERNELS_HPP_

#include <cstddef>
#include <span>
#include <string_view>

// Dense double-precision inner loops used by the network, the feature
// pipeline and the centrality code. Every kernel has a portable scalar
// reference and, on x86-64, an AVX2+FMA variant. The variant is chosen once
// at startup from CPUID; ENGAGE_SIMD=scalar in the environment forces the
// reference path.
//
// All matrices are row-major and densely packed (leading dimension = cols).

namespace engage::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

// The ISA the dispatcher currently routes to.
Isa active_isa();

// True when the CPU and the build both support `isa`.
bool isa_available(Isa isa);

// Routes subsequent calls to `isa`. Returns false (and changes nothing) when
// the ISA is unavailable. Not thread-safe; intended for tests and startup.
bool set_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);

// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// C(m x n) += A(m x k) * B(k x n)
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c);

// C(k x n) += A(m x k)^T * B(m x n)
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c);

// C(m x k) += A(m x n) * B(k x n)^T
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c);

// Per-ISA entry points. The equivalence tests call these directly.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c);
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c);
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c);
}  // namespace scalar

namespace avx2 {
bool compiled();
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c);
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c);
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c);
}  // namespace avx2

}  // namespace engage::simd

#endif  // ENGAGE_SIMD_KERNELS_HPP_
