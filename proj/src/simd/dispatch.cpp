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

#include <cstdlib>
#include <cstring>

#include "engage/simd/kernels.hpp"

namespace engage::simd {

namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  const char* forced = std::getenv("ENGAGE_SIMD");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) {
    return Isa::kScalar;
  }
  return isa_available(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

Isa& current() {
  static Isa isa = detect();
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

Isa active_isa() { return current(); }

bool isa_available(Isa isa) {
  if (isa == Isa::kScalar) return true;
  return avx2::compiled() && cpu_has_avx2();
}

bool set_isa(Isa isa) {
  if (!isa_available(isa)) return false;
  current() = isa;
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  return current() == Isa::kAvx2 ? avx2::dot(a.data(), b.data(), n)
                                 : scalar::dot(a.data(), b.data(), n);
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size() < y.size() ? x.size() : y.size();
  if (current() == Isa::kAvx2) {
    avx2::axpy(alpha, x.data(), y.data(), n);
  } else {
    scalar::axpy(alpha, x.data(), y.data(), n);
  }
}

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  if (current() == Isa::kAvx2) {
    avx2::gemm_nn(m, n, k, a, b, c);
  } else {
    scalar::gemm_nn(m, n, k, a, b, c);
  }
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  if (current() == Isa::kAvx2) {
    avx2::gemm_tn(m, n, k, a, b, c);
  } else {
    scalar::gemm_tn(m, n, k, a, b, c);
  }
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  if (current() == Isa::kAvx2) {
    avx2::gemm_nt(m, n, k, a, b, c);
  } else {
    scalar::gemm_nt(m, n, k, a, b, c);
  }
}

}  // namespace engage::simd
