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

#include "engage/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define ENGAGE_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#define ENGAGE_AVX2 __attribute__((target("avx2,fma")))
#else
#define ENGAGE_HAVE_AVX2_KERNELS 0
#endif

namespace engage::simd::avx2 {

#if ENGAGE_HAVE_AVX2_KERNELS

namespace {

constexpr std::size_t kDepthBlock = 256;

ENGAGE_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  const __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// C[r, 0..8) += sum_p A(r, p) * B[p, 0..8) for r < R. A(r, p) lives at
// a[r * a_row + p * a_step], which covers both A and A^T operands.
template <int R>
ENGAGE_AVX2 void block8(std::size_t depth, const double* a, std::size_t a_row,
                        std::size_t a_step, const double* b, std::size_t ldb,
                        double* c, std::size_t ldc) {
  __m256d lo[R];
  __m256d hi[R];
  for (int r = 0; r < R; ++r) {
    lo[r] = _mm256_loadu_pd(c + r * ldc);
    hi[r] = _mm256_loadu_pd(c + r * ldc + 4);
  }
  for (std::size_t p = 0; p < depth; ++p) {
    const __m256d b0 = _mm256_loadu_pd(b + p * ldb);
    const __m256d b1 = _mm256_loadu_pd(b + p * ldb + 4);
    for (int r = 0; r < R; ++r) {
      const __m256d av = _mm256_broadcast_sd(a + r * a_row + p * a_step);
      lo[r] = _mm256_fmadd_pd(av, b0, lo[r]);
      hi[r] = _mm256_fmadd_pd(av, b1, hi[r]);
    }
  }
  for (int r = 0; r < R; ++r) {
    _mm256_storeu_pd(c + r * ldc, lo[r]);
    _mm256_storeu_pd(c + r * ldc + 4, hi[r]);
  }
}

template <int R>
ENGAGE_AVX2 void block4(std::size_t depth, const double* a, std::size_t a_row,
                        std::size_t a_step, const double* b, std::size_t ldb,
                        double* c, std::size_t ldc) {
  __m256d acc[R];
  for (int r = 0; r < R; ++r) acc[r] = _mm256_loadu_pd(c + r * ldc);
  for (std::size_t p = 0; p < depth; ++p) {
    const __m256d b0 = _mm256_loadu_pd(b + p * ldb);
    for (int r = 0; r < R; ++r) {
      const __m256d av = _mm256_broadcast_sd(a + r * a_row + p * a_step);
      acc[r] = _mm256_fmadd_pd(av, b0, acc[r]);
    }
  }
  for (int r = 0; r < R; ++r) _mm256_storeu_pd(c + r * ldc, acc[r]);
}

template <int R>
ENGAGE_AVX2 void row_panel(std::size_t n, std::size_t depth, const double* a,
                           std::size_t a_row, std::size_t a_step,
                           const double* b, std::size_t ldb, double* c,
                           std::size_t ldc) {
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    block8<R>(depth, a, a_row, a_step, b + j, ldb, c + j, ldc);
  }
  for (; j + 4 <= n; j += 4) {
    block4<R>(depth, a, a_row, a_step, b + j, ldb, c + j, ldc);
  }
  for (; j < n; ++j) {
    for (int r = 0; r < R; ++r) {
      double s = c[r * ldc + j];
      for (std::size_t p = 0; p < depth; ++p) {
        s += a[r * a_row + p * a_step] * b[p * ldb + j];
      }
      c[r * ldc + j] = s;
    }
  }
}

// Shared driver for gemm_nn / gemm_tn: C(rows x n) += Op(A)(rows x depth) *
// B(depth x n).
ENGAGE_AVX2 void panel_gemm(std::size_t rows, std::size_t n, std::size_t depth,
                            const double* a, std::size_t a_row,
                            std::size_t a_step, const double* b, double* c) {
  for (std::size_t p0 = 0; p0 < depth; p0 += kDepthBlock) {
    const std::size_t dp = depth - p0 < kDepthBlock ? depth - p0 : kDepthBlock;
    const double* ap = a + p0 * a_step;
    const double* bp = b + p0 * n;
    std::size_t i = 0;
    for (; i + 4 <= rows; i += 4) {
      row_panel<4>(n, dp, ap + i * a_row, a_row, a_step, bp, n, c + i * n, n);
    }
    switch (rows - i) {
      case 3:
        row_panel<3>(n, dp, ap + i * a_row, a_row, a_step, bp, n, c + i * n, n);
        break;
      case 2:
        row_panel<2>(n, dp, ap + i * a_row, a_row, a_step, bp, n, c + i * n, n);
        break;
      case 1:
        row_panel<1>(n, dp, ap + i * a_row, a_row, a_step, bp, n, c + i * n, n);
        break;
      default:
        break;
    }
  }
}

}  // namespace

bool compiled() { return true; }

ENGAGE_AVX2 double dot(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                         _mm256_loadu_pd(b + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

ENGAGE_AVX2 void axpy(double alpha, const double* x, double* y,
                      std::size_t n) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(
        y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  panel_gemm(m, n, k, a, k, 1, b, c);
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  // Rows of C are columns of A; the reduction runs over the m rows of A.
  panel_gemm(k, n, m, a, 1, k, b, c);
}

ENGAGE_AVX2 void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
                         const double* a, const double* b, double* c) {
  std::size_t i = 0;
  for (; i + 2 <= m; i += 2) {
    const double* a0 = a + i * n;
    const double* a1 = a0 + n;
    std::size_t j = 0;
    for (; j + 4 <= k; j += 4) {
      const double* bj[4] = {b + j * n, b + (j + 1) * n, b + (j + 2) * n,
                             b + (j + 3) * n};
      __m256d acc0[4] = {_mm256_setzero_pd(), _mm256_setzero_pd(),
                         _mm256_setzero_pd(), _mm256_setzero_pd()};
      __m256d acc1[4] = {_mm256_setzero_pd(), _mm256_setzero_pd(),
                         _mm256_setzero_pd(), _mm256_setzero_pd()};
      std::size_t p = 0;
      for (; p + 4 <= n; p += 4) {
        const __m256d x0 = _mm256_loadu_pd(a0 + p);
        const __m256d x1 = _mm256_loadu_pd(a1 + p);
        for (int q = 0; q < 4; ++q) {
          const __m256d y = _mm256_loadu_pd(bj[q] + p);
          acc0[q] = _mm256_fmadd_pd(x0, y, acc0[q]);
          acc1[q] = _mm256_fmadd_pd(x1, y, acc1[q]);
        }
      }
      for (int q = 0; q < 4; ++q) {
        double s0 = hsum(acc0[q]);
        double s1 = hsum(acc1[q]);
        for (std::size_t t = p; t < n; ++t) {
          s0 += a0[t] * bj[q][t];
          s1 += a1[t] * bj[q][t];
        }
        c[i * k + j + q] += s0;
        c[(i + 1) * k + j + q] += s1;
      }
    }
    for (; j < k; ++j) {
      c[i * k + j] += dot(a0, b + j * n, n);
      c[(i + 1) * k + j] += dot(a1, b + j * n, n);
    }
  }
  for (; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      c[i * k + j] += dot(a + i * n, b + j * n, n);
    }
  }
}

#else

bool compiled() { return false; }
double dot(const double* a, const double* b, std::size_t n) {
  return scalar::dot(a, b, n);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  scalar::axpy(alpha, x, y, n);
}
void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  scalar::gemm_nn(m, n, k, a, b, c);
}
void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  scalar::gemm_tn(m, n, k, a, b, c);
}
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double* c) {
  scalar::gemm_nt(m, n, k, a, b, c);
}

#endif

}  // namespace engage::simd::avx2
