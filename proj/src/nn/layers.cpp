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

#include "engage/nn/layers.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "engage/simd/kernels.hpp"

namespace engage::nn {

namespace {

constexpr double kGeluScale = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluCubic = 0.044715;

}  // namespace

void glorot_uniform(Tensor2& w, std::size_t fan_in, std::size_t fan_out,
                    Rng& rng) {
  const double limit =
      std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : w.values()) v = rng.uniform(-limit, limit);
}

DenseLayer::DenseLayer(std::size_t in, std::size_t out)
    : weight(in, out), bias(1, out) {}

void DenseLayer::init(Rng& rng) {
  glorot_uniform(weight.value, in_dim(), out_dim(), rng);
  bias.value.fill(0.0);
}

Tensor2 DenseLayer::forward(const Tensor2& x) const {
  if (x.cols() != in_dim()) {
    throw std::invalid_argument("DenseLayer: input has " +
                                std::to_string(x.cols()) +
                                " columns, layer expects " +
                                std::to_string(in_dim()));
  }
  Tensor2 y(x.rows(), out_dim());
  for (std::size_t i = 0; i < y.rows(); ++i) {
    auto r = y.row(i);
    std::copy(bias.value.data(), bias.value.data() + out_dim(), r.begin());
  }
  simd::gemm_nn(x.rows(), out_dim(), in_dim(), x.data(), weight.value.data(),
                y.data());
  return y;
}

void DenseLayer::backward(const Tensor2& x, const Tensor2& dy, Tensor2* dx) {
  if (dy.rows() != x.rows() || dy.cols() != out_dim()) {
    throw std::invalid_argument("DenseLayer::backward: shape mismatch");
  }
  simd::gemm_tn(x.rows(), out_dim(), in_dim(), x.data(), dy.data(),
                weight.grad.data());
  auto db = bias.grad.values();
  for (std::size_t i = 0; i < dy.rows(); ++i) simd::axpy(1.0, dy.row(i), db);
  if (dx != nullptr) {
    *dx = Tensor2(x.rows(), in_dim());
    simd::gemm_nt(dy.rows(), out_dim(), in_dim(), dy.data(),
                  weight.value.data(), dx->data());
  }
}

double gelu(double x) {
  const double inner = kGeluScale * (x + kGeluCubic * x * x * x);
  return 0.5 * x * (1.0 + std::tanh(inner));
}

double gelu_grad(double x) {
  const double inner = kGeluScale * (x + kGeluCubic * x * x * x);
  const double t = std::tanh(inner);
  const double dinner = kGeluScale * (1.0 + 3.0 * kGeluCubic * x * x);
  return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * dinner;
}

Tensor2 gelu(const Tensor2& z) {
  Tensor2 out(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.size(); ++i) out.data()[i] = gelu(z.data()[i]);
  return out;
}

Tensor2 gelu_backward(const Tensor2& z, const Tensor2& dy) {
  Tensor2 dz(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.size(); ++i) {
    dz.data()[i] = dy.data()[i] * gelu_grad(z.data()[i]);
  }
  return dz;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

BceResult bce_with_logits(std::span<const double> logits,
                          std::span<const int> labels, double pos_weight) {
  if (logits.size() != labels.size()) {
    throw std::invalid_argument("bce_with_logits: " +
                                std::to_string(logits.size()) + " logits vs " +
                                std::to_string(labels.size()) + " labels");
  }
  BceResult out;
  out.grad.resize(logits.size());
  if (logits.empty()) return out;
  const double n = static_cast<double>(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double z = logits[i];
    // softplus(-z) for y = 1, softplus(z) for y = 0
    const double softplus_neg = std::max(-z, 0.0) + std::log1p(std::exp(-std::abs(z)));
    const double softplus_pos = softplus_neg + z;
    const double p = sigmoid(z);
    if (labels[i] == 1) {
      total += pos_weight * softplus_neg;
      out.grad[i] = pos_weight * (p - 1.0) / n;
    } else {
      total += softplus_pos;
      out.grad[i] = p / n;
    }
  }
  out.loss = total / n;
  return out;
}

}  // namespace engage::nn
