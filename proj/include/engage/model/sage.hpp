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

#ifndef ENGAGE_MODEL_SAGE_HPP_
#define ENGAGE_MODEL_SAGE_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "engage/model/classifier.hpp"
#include "engage/nn/layers.hpp"
#include "engage/nn/tensor.hpp"
#include "engage/postgraph.hpp"

namespace engage::model {

using nn::Tensor2;

// Row i = sum of h[j] over neighbors j of i, each term scaled by the edge
// weight when `weighted` is set.
Tensor2 aggregate(const graph::PostGraph& graph, const Tensor2& h,
                  bool weighted);

// One full-graph SAGE step: GELU(dense([h_i | aggregate(h)_i])). The dense
// layer's input width must be 2 * h.cols().
Tensor2 sage_forward(const nn::DenseLayer& layer, const Tensor2& h,
                     const graph::PostGraph& graph, bool weighted);

struct SageConfig {
  std::size_t hidden = 64;
  std::size_t layers = 2;
  std::size_t head = 16;
  bool weighted_agg = false;
};

// Stacked SAGE layers, a dense+GELU head and a single-logit output layer.
// forward() evaluates only the receptive field of the requested rows, which
// gives the same logits as a full-graph pass. The model keeps references to
// `x` and `graph`; both must outlive it.
class SageModel : public Classifier {
 public:
  SageModel(const Tensor2& x, const graph::PostGraph& graph, SageConfig config,
            std::uint64_t seed);

  std::string_view kind() const override { return "tweetgage"; }
  std::size_t n_nodes() const override { return x_.rows(); }
  std::vector<nn::Param*> parameters() override;
  std::vector<double> forward(std::span<const std::size_t> rows) override;
  void backward(std::span<const double> dlogits) override;

  const SageConfig& config() const { return config_; }
  std::vector<nn::DenseLayer>& sage_layers() { return sage_; }
  nn::DenseLayer& head() { return head_; }
  nn::DenseLayer& output() { return out_; }

 private:
  struct LayerCache {
    std::vector<std::uint32_t> nodes;  // rows evaluated at this layer
    Tensor2 input;                     // [self | aggregate] per node
    Tensor2 pre;                       // dense output before GELU
    Tensor2 act;                       // GELU(pre)
  };

  // Adds neighbor terms of `nodes` (rows of `h`, indexed through `local`)
  // into `out`, or scatters gradients back when `transpose` is set.
  void aggregate_rows(const std::vector<std::uint32_t>& nodes,
                      const Tensor2& h, std::size_t col_offset, Tensor2& out,
                      bool transpose) const;

  const Tensor2& x_;
  const graph::PostGraph& graph_;
  SageConfig config_;
  Tensor2 ax_;  // aggregate(x) for the first layer, precomputed
  std::vector<nn::DenseLayer> sage_;
  nn::DenseLayer head_;
  nn::DenseLayer out_;

  std::vector<LayerCache> cache_;
  Tensor2 head_pre_;
  Tensor2 head_act_;
  std::vector<std::int64_t> local_;  // node -> row in the layer below
};

}  // namespace engage::model

#endif  // ENGAGE_MODEL_SAGE_HPP_
