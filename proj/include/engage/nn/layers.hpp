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

#ifndef ENGAGE_NN_LAYERS_HPP_
#define ENGAGE_NN_LAYERS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "engage/common/random.hpp"
#include "engage/nn/tensor.hpp"

namespace engage::nn {

// A trainable tensor and its gradient buffer.
struct Param {
  Tensor2 value;
  Tensor2 grad;

  explicit Param(std::size_t rows = 0, std::size_t cols = 0)
      : value(rows, cols), grad(rows, cols) {}
  void zero_grad() { grad.fill(0.0); }
};

// Glorot-uniform fill: U(-a, a), a = sqrt(6 / (fan_in + fan_out)).
void glorot_uniform(Tensor2& w, std::size_t fan_in, std::size_t fan_out,
                    Rng& rng);

// y = x W + b, W is (in x out), b is (1 x out).
class DenseLayer {
 public:
  DenseLayer() = default;
  DenseLayer(std::size_t in, std::size_t out);

  std::size_t in_dim() const { return weight.value.rows(); }
  std::size_t out_dim() const { return weight.value.cols(); }

  void init(Rng& rng);

  Tensor2 forward(const Tensor2& x) const;

  // Accumulates dW and db from the layer input `x` and the upstream gradient
  // `dy`. Writes dL/dx into `dx` when non-null.
  void backward(const Tensor2& x, const Tensor2& dy, Tensor2* dx);

  Param weight;
  Param bias;
};

// tanh approximation: 0.5 x (1 + tanh(sqrt(2/pi) (x + 0.044715 x^3)))
double gelu(double x);
double gelu_grad(double x);

Tensor2 gelu(const Tensor2& z);

// dz = dy * gelu'(z), elementwise.
Tensor2 gelu_backward(const Tensor2& z, const Tensor2& dy);

double sigmoid(double z);

struct BceResult {
  double loss = 0.0;
  std::vector<double> grad;  // dLoss/dlogit, already divided by n
};

// Mean binary cross-entropy on logits. `pos_weight` scales the terms with
// label 1 (1.0 means unweighted).
BceResult bce_with_logits(std::span<const double> logits,
                          std::span<const int> labels, double pos_weight = 1.0);

}  // namespace engage::nn

#endif  // ENGAGE_NN_LAYERS_HPP_
