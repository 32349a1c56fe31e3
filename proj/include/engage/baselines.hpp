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

#ifndef ENGAGE_BASELINES_HPP_
#define ENGAGE_BASELINES_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "engage/model/classifier.hpp"
#include "engage/nn/layers.hpp"
#include "engage/nn/tensor.hpp"

namespace engage::baselines {

using nn::Tensor2;

enum class BaselineKind { kMlp, kCnn1d, kLinearProbe };

std::string_view baseline_name(BaselineKind kind);
BaselineKind parse_baseline(std::string_view name);

// Learning rates used when none is given.
double default_lr(BaselineKind kind);

// Dense GELU layers followed by a single-logit output. The model keeps a
// reference to `x`, which must outlive it.
class MlpModel : public model::Classifier {
 public:
  MlpModel(const Tensor2& x, std::vector<std::size_t> hidden,
           std::uint64_t seed);

  std::string_view kind() const override { return "mlp"; }
  std::size_t n_nodes() const override { return x_.rows(); }
  std::vector<nn::Param*> parameters() override;
  std::vector<double> forward(std::span<const std::size_t> rows) override;
  void backward(std::span<const double> dlogits) override;

 private:
  const Tensor2& x_;
  std::vector<nn::DenseLayer> hidden_;
  nn::DenseLayer out_;
  std::vector<Tensor2> inputs_;  // input of each hidden layer
  std::vector<Tensor2> pre_;     // pre-activation of each hidden layer
  Tensor2 last_;                 // input of the output layer
};

// Single dense layer from frozen inputs to one logit.
class LinearProbe : public model::Classifier {
 public:
  LinearProbe(const Tensor2& x, std::uint64_t seed);

  std::string_view kind() const override { return "linear-probe"; }
  std::size_t n_nodes() const override { return x_.rows(); }
  std::vector<nn::Param*> parameters() override;
  std::vector<double> forward(std::span<const std::size_t> rows) override;
  void backward(std::span<const double> dlogits) override;

 private:
  const Tensor2& x_;
  nn::DenseLayer out_;
  Tensor2 input_;
};

// Valid 1-D convolution, stride 1, over a (length x in_channels) signal.
// Weights are stored as (kernel * in_channels) x out_channels so that a
// window of the row-major signal multiplies the weight matrix directly.
class Conv1dLayer {
 public:
  Conv1dLayer() = default;
  Conv1dLayer(std::size_t in_channels, std::size_t out_channels,
              std::size_t kernel);

  std::size_t in_channels() const { return in_channels_; }
  std::size_t out_channels() const { return out_channels_; }
  std::size_t kernel() const { return kernel_; }
  std::size_t out_length(std::size_t length) const {
    return length - kernel_ + 1;
  }

  void init(Rng& rng);

  // `x` holds `batch` signals stacked as (batch * length) x in_channels.
  // Returns (batch * out_length) x out_channels.
  Tensor2 forward(const Tensor2& x, std::size_t batch,
                  std::size_t length) const;

  // Accumulates weight/bias gradients; writes dL/dx into `dx` when non-null.
  void backward(const Tensor2& x, std::size_t batch, std::size_t length,
                const Tensor2& dy, Tensor2* dx);

  nn::Param weight;
  nn::Param bias;

 private:
  Tensor2 im2col(const Tensor2& x, std::size_t batch, std::size_t length) const;

  std::size_t in_channels_ = 0;
  std::size_t out_channels_ = 0;
  std::size_t kernel_ = 0;
};

// Two valid convolutions with GELU over each embedding row read as a
// single-channel sequence, then flatten and a dense single-logit output.
class Cnn1dModel : public model::Classifier {
 public:
  Cnn1dModel(const Tensor2& x, std::size_t kernel,
             std::vector<std::size_t> channels, std::uint64_t seed);

  std::string_view kind() const override { return "cnn1d"; }
  std::size_t n_nodes() const override { return x_.rows(); }
  std::vector<nn::Param*> parameters() override;
  std::vector<double> forward(std::span<const std::size_t> rows) override;
  void backward(std::span<const double> dlogits) override;

  std::vector<Conv1dLayer>& convs() { return convs_; }

 private:
  const Tensor2& x_;
  std::vector<Conv1dLayer> convs_;
  nn::DenseLayer out_;
  std::size_t batch_ = 0;
  std::vector<Tensor2> inputs_;  // input of each conv layer
  std::vector<Tensor2> pre_;     // pre-activation of each conv layer
  Tensor2 flat_;                 // flattened input of the output layer
};

// Default architectures: MLP 32-32, CNN kernel 3 with 8 then 16 channels.
std::unique_ptr<model::Classifier> make_baseline(BaselineKind kind,
                                                 const Tensor2& x,
                                                 std::uint64_t seed);

}  // namespace engage::baselines

#endif  // ENGAGE_BASELINES_HPP_
