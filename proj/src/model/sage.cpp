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

#include "engage/model/sage.hpp"

#include <stdexcept>
#include <string>

#include "engage/common/random.hpp"
#include "engage/simd/kernels.hpp"

namespace engage::model {

namespace {

constexpr std::int64_t kAbsent = -1;

}  // namespace

Tensor2 aggregate(const graph::PostGraph& graph, const Tensor2& h,
                  bool weighted) {
  if (h.rows() != graph.n_nodes()) {
    throw std::invalid_argument("aggregate: " + std::to_string(h.rows()) +
                                " rows for " +
                                std::to_string(graph.n_nodes()) + " nodes");
  }
  Tensor2 out(h.rows(), h.cols());
  for (std::uint32_t i = 0; i < graph.n_nodes(); ++i) {
    const auto nbr = graph.neighbors(i);
    const auto wts = graph.weights(i);
    auto dst = out.row(i);
    for (std::size_t k = 0; k < nbr.size(); ++k) {
      simd::axpy(weighted ? static_cast<double>(wts[k]) : 1.0, h.row(nbr[k]),
                 dst);
    }
  }
  return out;
}

Tensor2 sage_forward(const nn::DenseLayer& layer, const Tensor2& h,
                     const graph::PostGraph& graph, bool weighted) {
  if (layer.in_dim() != 2 * h.cols()) {
    throw std::invalid_argument("sage_forward: layer expects " +
                                std::to_string(layer.in_dim()) +
                                " inputs, concat gives " +
                                std::to_string(2 * h.cols()));
  }
  return nn::gelu(layer.forward(nn::hconcat(h, aggregate(graph, h, weighted))));
}

SageModel::SageModel(const Tensor2& x, const graph::PostGraph& graph,
                     SageConfig config, std::uint64_t seed)
    : x_(x), graph_(graph), config_(config) {
  if (x.rows() != graph.n_nodes()) {
    throw std::invalid_argument("SageModel: feature rows (" +
                                std::to_string(x.rows()) +
                                ") do not match graph nodes (" +
                                std::to_string(graph.n_nodes()) + ")");
  }
  if (config.layers == 0 || config.hidden == 0 || config.head == 0) {
    throw std::invalid_argument("SageModel: layers, hidden and head must be positive");
  }
  ax_ = aggregate(graph, x, config.weighted_agg);
  Rng rng(derive_seed(seed, "sage/init"));
  std::size_t in = x.cols();
  for (std::size_t l = 0; l < config.layers; ++l) {
    sage_.emplace_back(2 * in, config.hidden);
    sage_.back().init(rng);
    in = config.hidden;
  }
  head_ = nn::DenseLayer(config.hidden, config.head);
  head_.init(rng);
  out_ = nn::DenseLayer(config.head, 1);
  out_.init(rng);
  cache_.resize(config.layers);
  local_.assign(x.rows(), kAbsent);
}

std::vector<nn::Param*> SageModel::parameters() {
  std::vector<nn::Param*> out;
  for (auto& layer : sage_) {
    out.push_back(&layer.weight);
    out.push_back(&layer.bias);
  }
  out.push_back(&head_.weight);
  out.push_back(&head_.bias);
  out.push_back(&out_.weight);
  out.push_back(&out_.bias);
  return out;
}

void SageModel::aggregate_rows(const std::vector<std::uint32_t>& nodes,
                               const Tensor2& h, std::size_t col_offset,
                               Tensor2& out, bool transpose) const {
  const std::size_t d = h.cols();
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    const auto nbr = graph_.neighbors(nodes[r]);
    const auto wts = graph_.weights(nodes[r]);
    for (std::size_t k = 0; k < nbr.size(); ++k) {
      const double w = config_.weighted_agg ? static_cast<double>(wts[k]) : 1.0;
      const auto j = static_cast<std::size_t>(local_[nbr[k]]);
      if (transpose) {
        // out holds gradients w.r.t. the layer below, h the upstream slice.
        simd::axpy(w, h.row(r), out.row(j));
      } else {
        simd::axpy(w, h.row(j), out.row(r).subspan(col_offset, d));
      }
    }
  }
}

std::vector<double> SageModel::forward(std::span<const std::size_t> rows) {
  const std::size_t n_layers = sage_.size();
  for (const std::size_t r : rows) {
    if (r >= n_nodes()) throw std::out_of_range("SageModel: row index");
  }

  // Receptive fields, top layer first: layer l needs layer l-1 on its own
  // nodes and their neighbors. The bottom layer reads x and ax_ directly.
  cache_[n_layers - 1].nodes.assign(rows.begin(), rows.end());
  for (std::size_t l = n_layers - 1; l > 0; --l) {
    const auto& above = cache_[l].nodes;
    auto& below = cache_[l - 1].nodes;
    for (const auto v : below) local_[v] = kAbsent;
    below.clear();
    auto add = [&](std::uint32_t v) {
      if (local_[v] == kAbsent) {
        local_[v] = static_cast<std::int64_t>(below.size());
        below.push_back(v);
      }
    };
    for (const auto v : above) add(v);
    for (const auto v : above) {
      for (const auto u : graph_.neighbors(v)) add(u);
    }
    for (const auto v : below) local_[v] = kAbsent;
  }

  for (std::size_t l = 0; l < n_layers; ++l) {
    auto& c = cache_[l];
    const std::size_t d_in = l == 0 ? x_.cols() : config_.hidden;
    c.input = Tensor2(c.nodes.size(), 2 * d_in);
    if (l == 0) {
      for (std::size_t r = 0; r < c.nodes.size(); ++r) {
        auto dst = c.input.row(r);
        const auto self = x_.row(c.nodes[r]);
        const auto agg = ax_.row(c.nodes[r]);
        std::copy(self.begin(), self.end(), dst.begin());
        std::copy(agg.begin(), agg.end(), dst.begin() + d_in);
      }
    } else {
      const auto& below = cache_[l - 1];
      for (std::size_t r = 0; r < below.nodes.size(); ++r) {
        local_[below.nodes[r]] = static_cast<std::int64_t>(r);
      }
      for (std::size_t r = 0; r < c.nodes.size(); ++r) {
        const auto self = below.act.row(
            static_cast<std::size_t>(local_[c.nodes[r]]));
        std::copy(self.begin(), self.end(), c.input.row(r).begin());
      }
      aggregate_rows(c.nodes, below.act, d_in, c.input, false);
      for (const auto v : below.nodes) local_[v] = kAbsent;
    }
    c.pre = sage_[l].forward(c.input);
    c.act = nn::gelu(c.pre);
  }

  head_pre_ = head_.forward(cache_.back().act);
  head_act_ = nn::gelu(head_pre_);
  const Tensor2 logits = out_.forward(head_act_);
  const auto v = logits.values();
  return {v.begin(), v.end()};
}

void SageModel::backward(std::span<const double> dlogits) {
  const std::size_t n_top = cache_.back().nodes.size();
  if (dlogits.size() != n_top) {
    throw std::invalid_argument("SageModel::backward: expected " +
                                std::to_string(n_top) + " logit gradients");
  }
  Tensor2 dlog(n_top, 1, std::vector<double>(dlogits.begin(), dlogits.end()));
  Tensor2 dhead_act;
  out_.backward(head_act_, dlog, &dhead_act);
  Tensor2 dh;
  head_.backward(cache_.back().act, nn::gelu_backward(head_pre_, dhead_act),
                 &dh);

  for (std::size_t l = sage_.size(); l-- > 0;) {
    auto& c = cache_[l];
    const Tensor2 dpre = nn::gelu_backward(c.pre, dh);
    if (l == 0) {
      sage_[l].backward(c.input, dpre, nullptr);
      break;
    }
    Tensor2 dinput;
    sage_[l].backward(c.input, dpre, &dinput);
    const auto& below = cache_[l - 1];
    const std::size_t d = config_.hidden;
    Tensor2 dbelow(below.nodes.size(), d);
    for (std::size_t r = 0; r < below.nodes.size(); ++r) {
      local_[below.nodes[r]] = static_cast<std::int64_t>(r);
    }
    Tensor2 dagg(c.nodes.size(), d);
    for (std::size_t r = 0; r < c.nodes.size(); ++r) {
      const auto src = dinput.row(r);
      simd::axpy(1.0, src.subspan(0, d),
                 dbelow.row(static_cast<std::size_t>(local_[c.nodes[r]])));
      std::copy(src.begin() + d, src.end(), dagg.row(r).begin());
    }
    aggregate_rows(c.nodes, dagg, 0, dbelow, true);
    for (const auto v : below.nodes) local_[v] = kAbsent;
    dh = std::move(dbelow);
  }
}

}  // namespace engage::model
