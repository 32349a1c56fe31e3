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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "engage/common/random.hpp"

namespace engage::simd {
namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  }
  return worst;
}

// The AVX2 path reorders sums and fuses multiply-adds, so results agree with
// the scalar reference to rounding, not bit for bit.
constexpr double kTol = 1e-13;

class Avx2Equivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!isa_available(Isa::kAvx2)) GTEST_SKIP() << "AVX2 not available";
  }
};

TEST_F(Avx2Equivalence, Dot) {
  Rng rng(1);
  for (std::size_t n : {0, 1, 3, 4, 5, 7, 8, 15, 16, 17, 33, 100, 1023}) {
    const auto a = random_vector(rng, n);
    const auto b = random_vector(rng, n);
    EXPECT_NEAR(avx2::dot(a.data(), b.data(), n), scalar::dot(a.data(), b.data(), n), kTol * (1 + n));
  }
}

TEST_F(Avx2Equivalence, Axpy) {
  Rng rng(2);
  for (std::size_t n : {0, 1, 3, 4, 5, 8, 13, 64, 257}) {
    const auto x = random_vector(rng, n);
    auto y1 = random_vector(rng, n);
    auto y2 = y1;
    scalar::axpy(0.37, x.data(), y1.data(), n);
    avx2::axpy(0.37, x.data(), y2.data(), n);
    EXPECT_LT(max_rel(y2, y1), kTol);
  }
}

TEST_F(Avx2Equivalence, GemmVariants) {
  Rng rng(3);
  const std::size_t shapes[][3] = {{1, 1, 1}, {3, 5, 7}, {4, 4, 4}, {8, 9, 3},
                                   {17, 13, 11}, {32, 64, 16}, {5, 1, 40}, {2, 33, 1}};
  for (const auto& s : shapes) {
    const std::size_t m = s[0], n = s[1], k = s[2];
    {
      const auto a = random_vector(rng, m * k);
      const auto b = random_vector(rng, k * n);
      auto c1 = random_vector(rng, m * n);
      auto c2 = c1;
      scalar::gemm_nn(m, n, k, a.data(), b.data(), c1.data());
      avx2::gemm_nn(m, n, k, a.data(), b.data(), c2.data());
      EXPECT_LT(max_rel(c2, c1), kTol * k) << m << "x" << n << "x" << k;
    }
    {
      const auto a = random_vector(rng, m * k);
      const auto b = random_vector(rng, m * n);
      auto c1 = random_vector(rng, k * n);
      auto c2 = c1;
      scalar::gemm_tn(m, n, k, a.data(), b.data(), c1.data());
      avx2::gemm_tn(m, n, k, a.data(), b.data(), c2.data());
      EXPECT_LT(max_rel(c2, c1), kTol * m) << m << "x" << n << "x" << k;
    }
    {
      const auto a = random_vector(rng, m * n);
      const auto b = random_vector(rng, k * n);
      auto c1 = random_vector(rng, m * k);
      auto c2 = c1;
      scalar::gemm_nt(m, n, k, a.data(), b.data(), c1.data());
      avx2::gemm_nt(m, n, k, a.data(), b.data(), c2.data());
      EXPECT_LT(max_rel(c2, c1), kTol * n) << m << "x" << n << "x" << k;
    }
  }
}

TEST(ScalarKernels, GemmMatchesNaiveTripleLoop) {
  Rng rng(4);
  const std::size_t m = 6, n = 5, k = 4;
  const auto a = random_vector(rng, m * k);
  const auto b = random_vector(rng, k * n);
  std::vector<double> c(m * n, 1.0);
  scalar::gemm_nn(m, n, k, a.data(), b.data(), c.data());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 1.0;
      for (std::size_t p = 0; p < k; ++p) s += a[i * k + p] * b[p * n + j];
      EXPECT_NEAR(c[i * n + j], s, 1e-15);
    }
  }
}

TEST(Dispatch, SwitchingIsaRoutesCalls) {
  const Isa original = active_isa();
  ASSERT_TRUE(set_isa(Isa::kScalar));
  EXPECT_EQ(active_isa(), Isa::kScalar);
  const std::vector<double> a = {1, 2, 3, 4, 5};
  EXPECT_EQ(dot(a, a), 55.0);
  if (isa_available(Isa::kAvx2)) {
    ASSERT_TRUE(set_isa(Isa::kAvx2));
    EXPECT_EQ(active_isa(), Isa::kAvx2);
    EXPECT_EQ(dot(a, a), 55.0);
  } else {
    EXPECT_FALSE(set_isa(Isa::kAvx2));
  }
  set_isa(original);
  EXPECT_EQ(isa_name(Isa::kScalar), "scalar");
}

}  // namespace
}  // namespace engage::simd
