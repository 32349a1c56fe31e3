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

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "engage/common/random.hpp"
#include "engage/nn/checkpoint.hpp"
#include "engage/nn/layers.hpp"
#include "engage/nn/optim.hpp"
#include "engage/nn/tensor.hpp"

namespace engage::nn {
namespace {

Tensor2 random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  Tensor2 m(r, c);
  for (double& v : m.values()) v = rng.uniform(-1.0, 1.0);
  return m;
}

TEST(Tensor2, MatmulMatchesTripleLoop) {
  Rng rng(1);
  const Tensor2 a = random_matrix(rng, 7, 5);
  const Tensor2 b = random_matrix(rng, 5, 3);
  const Tensor2 c = matmul(a, b);
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 5; ++k) s += a(i, k) * b(k, j);
      EXPECT_NEAR(c(i, j), s, 1e-14);
    }
  }
  EXPECT_THROW(matmul(a, a), std::invalid_argument);
}

TEST(Tensor2, GatherConcatTranspose) {
  const Tensor2 a = {{1, 2}, {3, 4}, {5, 6}};
  const std::vector<std::size_t> rows = {2, 0};
  EXPECT_EQ(gather_rows(a, rows), (Tensor2{{5, 6}, {1, 2}}));
  EXPECT_EQ(hconcat(a, Tensor2{{7}, {8}, {9}}), (Tensor2{{1, 2, 7}, {3, 4, 8}, {5, 6, 9}}));
  EXPECT_EQ(transpose(a), (Tensor2{{1, 3, 5}, {2, 4, 6}}));
  EXPECT_THROW(hconcat(a, Tensor2(2, 1)), std::invalid_argument);
  EXPECT_THROW((Tensor2{{1, 2}, {3}}), std::invalid_argument);
}

TEST(Tensor2, FiniteCheck) {
  Tensor2 a(2, 2, 1.0);
  EXPECT_TRUE(a.all_finite());
  a(1, 1) = std::nan("");
  EXPECT_FALSE(a.all_finite());
}

TEST(DenseLayer, ForwardCases) {
  DenseLayer id(2, 2);
  id.weight.value = {{1, 0}, {0, 1}};
  const Tensor2 x = {{3, -4}, {0.5, 2}};
  EXPECT_EQ(id.forward(x), x);
  DenseLayer bias_only(3, 2);
  bias_only.bias.value = {{7, -1}};
  EXPECT_EQ(bias_only.forward(Tensor2(4, 3)), (Tensor2{{7, -1}, {7, -1}, {7, -1}, {7, -1}}));
  DenseLayer sum(2, 1);
  sum.weight.value = {{1}, {1}};
  EXPECT_EQ(sum.forward(Tensor2{{2, 3}}), (Tensor2{{5}}));
  EXPECT_THROW(sum.forward(Tensor2(1, 3)), std::invalid_argument);
}

TEST(DenseLayer, BackwardMatchesFiniteDifferences) {
  Rng rng(2);
  DenseLayer layer(4, 3);
  layer.init(rng);
  for (double& v : layer.bias.value.values()) v = rng.uniform(-1, 1);
  const Tensor2 x = random_matrix(rng, 5, 4);
  const Tensor2 up = random_matrix(rng, 5, 3);
  auto loss = [&](const DenseLayer& l, const Tensor2& in) {
    const Tensor2 y = l.forward(in);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y.values()[i] * up.values()[i];
    return s;
  };
  layer.weight.zero_grad();
  layer.bias.zero_grad();
  Tensor2 dx;
  layer.backward(x, up, &dx);
  const double h = 1e-6;
  for (std::size_t i = 0; i < layer.weight.value.size(); ++i) {
    DenseLayer p = layer;
    DenseLayer m = layer;
    p.weight.value.values()[i] += h;
    m.weight.value.values()[i] -= h;
    EXPECT_NEAR(layer.weight.grad.values()[i], (loss(p, x) - loss(m, x)) / (2 * h), 1e-8);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    Tensor2 p = x;
    Tensor2 m = x;
    p.values()[i] += h;
    m.values()[i] -= h;
    EXPECT_NEAR(dx.values()[i], (loss(layer, p) - loss(layer, m)) / (2 * h), 1e-8);
  }
  for (std::size_t c = 0; c < 3; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < 5; ++r) s += up(r, c);
    EXPECT_NEAR(layer.bias.grad(0, c), s, 1e-14);
  }
}

TEST(GlorotUniform, BoundsAndDeterminism) {
  Rng a(3);
  Rng b(3);
  Tensor2 w1(30, 20);
  Tensor2 w2(30, 20);
  glorot_uniform(w1, 30, 20, a);
  glorot_uniform(w2, 30, 20, b);
  EXPECT_EQ(w1, w2);
  const double bound = std::sqrt(6.0 / 50.0);
  for (double v : w1.values()) EXPECT_LE(std::abs(v), bound);
}

TEST(Gelu, KnownValues) {
  EXPECT_EQ(gelu(0.0), 0.0);
  EXPECT_NEAR(gelu(10.0), 10.0, 1e-6);
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big x = 1;
  const Big c = sqrt(Big(2) / boost::math::constants::pi<Big>());
  const Big ref = Big("0.5") * x * (1 + tanh(c * (x + Big("0.044715") * x * x * x)));
  EXPECT_NEAR(gelu(1.0), static_cast<double>(ref), 1e-15);
}

TEST(Gelu, ShapeProperties) {
  double prev = 0.0;
  for (double x = 0.0; x < 8.0; x += 0.01) {
    EXPECT_GE(gelu(x), prev);
    prev = gelu(x);
  }
  EXPECT_LT(std::abs(gelu(20.0) - 20.0), 1e-12);
  EXPECT_LT(std::abs(gelu(-20.0)), 1e-12);
}

TEST(Gelu, GradientMatchesFiniteDifferences) {
  for (double x = -6.0; x <= 6.0; x += 0.173) {
    const double h = 1e-6;
    EXPECT_NEAR(gelu_grad(x), (gelu(x + h) - gelu(x - h)) / (2 * h), 1e-8) << x;
  }
  const Tensor2 z = {{-1.0, 0.5}};
  const Tensor2 dy = {{2.0, 3.0}};
  const Tensor2 dz = gelu_backward(z, dy);
  EXPECT_DOUBLE_EQ(dz(0, 0), 2.0 * gelu_grad(-1.0));
  EXPECT_DOUBLE_EQ(dz(0, 1), 3.0 * gelu_grad(0.5));
}

TEST(Bce, KnownValuesAndSaturation) {
  const std::vector<double> z0 = {0.0};
  const std::vector<int> y1 = {1};
  EXPECT_NEAR(bce_with_logits(z0, y1).loss, std::log(2.0), 1e-15);
  const std::vector<double> big = {50.0};
  const BceResult r = bce_with_logits(big, y1);
  EXPECT_LT(r.loss, 1e-20);
  EXPECT_TRUE(std::isfinite(r.loss));
  const std::vector<double> huge = {-1000.0};
  EXPECT_NEAR(bce_with_logits(huge, y1).loss, 1000.0, 1e-9);
  EXPECT_NEAR(sigmoid(0.0), 0.5, 0.0);
  EXPECT_NEAR(sigmoid(50.0), 1.0, 1e-15);
  EXPECT_THROW(bce_with_logits(z0, std::vector<int>{1, 0}), std::invalid_argument);
}

TEST(Bce, GradientMatchesFiniteDifferences) {
  Rng rng(4);
  std::vector<double> z(16);
  std::vector<int> y(16);
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] = rng.uniform(-4, 4);
    y[i] = static_cast<int>(rng.index(2));
  }
  for (double pw : {1.0, 2.5}) {
    const BceResult r = bce_with_logits(z, y, pw);
    for (std::size_t i = 0; i < z.size(); ++i) {
      auto zp = z;
      auto zm = z;
      const double h = 1e-6;
      zp[i] += h;
      zm[i] -= h;
      const double fd =
          (bce_with_logits(zp, y, pw).loss - bce_with_logits(zm, y, pw).loss) / (2 * h);
      EXPECT_NEAR(r.grad[i], fd, 1e-6);
    }
  }
}

TEST(Adam, ZeroGradientLeavesParamsUnchanged) {
  Param p(2, 2);
  p.value = {{1, 2}, {3, 4}};
  const Tensor2 before = p.value;
  Adam opt({&p}, AdamConfig{0.1});
  opt.step();
  opt.step();
  EXPECT_EQ(p.value, before);
  EXPECT_EQ(opt.steps(), 2u);
}

TEST(Adam, FirstStepIsLrTimesSign) {
  Param p(1, 1);
  p.value(0, 0) = 1.0;
  p.grad(0, 0) = -0.3;
  Adam opt({&p}, AdamConfig{0.01});
  opt.step();
  EXPECT_NEAR(p.value(0, 0), 1.0 + 0.01 * 0.3 / (0.3 + 1e-8), 1e-15);
}

TEST(Adam, TwoStepsMatchScalarRecurrence) {
  Param p(1, 1);
  p.value(0, 0) = 0.5;
  p.grad(0, 0) = 0.2;
  Adam opt({&p}, AdamConfig{0.05});
  opt.step();
  opt.step();
  double w = 0.5, m = 0.0, v = 0.0;
  for (int t = 1; t <= 2; ++t) {
    m = 0.9 * m + 0.1 * 0.2;
    v = 0.999 * v + 0.001 * 0.04;
    const double mh = m / (1 - std::pow(0.9, t));
    const double vh = v / (1 - std::pow(0.999, t));
    w -= 0.05 * mh / (std::sqrt(vh) + 1e-8);
  }
  EXPECT_NEAR(p.value(0, 0), w, 1e-15);
}

TEST(Plateau, RuleTrace) {
  PlateauScheduler improving(0.1, 2);
  for (double m = 1.0; m > 0.5; m -= 0.01) EXPECT_EQ(improving.step(m), 0.1);

  PlateauScheduler flat(0.1, 2);
  EXPECT_EQ(flat.step(1.0), 0.1);
  EXPECT_EQ(flat.step(1.0), 0.1);
  EXPECT_DOUBLE_EQ(flat.step(1.0), 0.1 * 0.1);

  PlateauScheduler floor(2e-6, 1, 0.1, 1e-6);
  floor.step(1.0);
  EXPECT_EQ(floor.step(1.0), 1e-6);
  EXPECT_EQ(floor.step(1.0), 1e-6);
}

TEST(Plateau, SmallGainsDoNotCount) {
  PlateauScheduler s(1.0, 1, 0.5, 1e-6, 1e-4);
  s.step(1.0);
  EXPECT_EQ(s.step(1.0 - 5e-5), 0.5);
}

TEST(EarlyStop, RuleTrace) {
  EarlyStopping improving(5);
  for (double m = 1.0; m > 0.0; m -= 0.01) EXPECT_FALSE(improving.update(m));

  EarlyStopping flat(5);
  EXPECT_FALSE(flat.update(1.0));
  for (int i = 1; i < 5; ++i) EXPECT_FALSE(flat.update(1.0));
  EXPECT_TRUE(flat.update(1.0));

  EarlyStopping reset(5);
  reset.update(1.0);
  for (int i = 0; i < 3; ++i) EXPECT_FALSE(reset.update(1.0));
  EXPECT_FALSE(reset.update(0.5));
  EXPECT_TRUE(reset.improved());
  EXPECT_EQ(reset.wait(), 0u);
  for (int i = 0; i < 4; ++i) EXPECT_FALSE(reset.update(0.5));
  EXPECT_TRUE(reset.update(0.5));
}

TEST(Checkpoint, RoundTripAndHeader) {
  Rng rng(5);
  std::vector<LayerBlob> layers(2);
  layers[0].weight = random_matrix(rng, 3, 2);
  layers[0].bias = {0.1, -0.2};
  layers[1].weight = random_matrix(rng, 2, 1);
  layers[1].bias = {1e-300};
  const std::string path = (std::filesystem::temp_directory_path() / "engage_ckpt.tgm1").string();
  write_checkpoint(path, layers);
  const auto back = read_checkpoint(path);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].weight, layers[i].weight);
    EXPECT_EQ(back[i].bias, layers[i].bias);
  }
  std::ifstream in(path, std::ios::binary);
  char head[8];
  in.read(head, 8);
  EXPECT_EQ(std::string(head, 4), "TGM1");
  EXPECT_EQ(head[4], 2);
  in.close();
  std::filesystem::resize_file(path, 30);
  EXPECT_THROW(read_checkpoint(path), std::runtime_error);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace engage::nn
