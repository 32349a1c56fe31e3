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

#include "engage/baselines.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "engage/common/random.hpp"
#include "engage/simd/kernels.hpp"

namespace engage::baselines {

namespace {

Tensor2 gather(const Tensor2& x, std::span<const std::size_t> rows) {
  for (const std::size_t r : rows) {
    if (r >= x.rows()) throw std::out_of_range("baseline: row index");
  }
  return nn::gather_rows(x, rows);
}

std::vector<double> column(const Tensor2& t) {
  const auto v = t.values();
  return {v.begin(), v.end()};
}

Tensor2 as_column(std::span<const double> v) {
  return Tensor2(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

// Same buffer, different row split.
Tensor2 reshape(Tensor2 t, std::size_t rows, std::size_t cols) {
  if (rows * cols != t.size()) throw std::logic_error("reshape: size mismatch");
  const auto v = t.values();
  return Tensor2(rows, cols, std::vector<double>(v.begin(), v.end()));
}

}  // namespace

std::string_view baseline_name(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kMlp: return "mlp";
    case BaselineKind::kCnn1d: return "cnn1d";
    case BaselineKind::kLinearProbe: return "linear-probe";
  }
  throw std::logic_error("unknown baseline kind");
}

BaselineKind parse_baseline(std::string_view name) {
  for (const auto kind : {BaselineKind::kMlp, BaselineKind::kCnn1d,
                          BaselineKind::kLinearProbe}) {
    if (baseline_name(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown baseline '" + std::string(name) +
                              "' (expected mlp, cnn1d or linear-probe)");
}

double default_lr(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kMlp: return 1e-2;
    case BaselineKind::kCnn1d: return 1e-1;
    case BaselineKind::kLinearProbe: return 1e-4;
  }
  throw std::logic_error("unknown baseline kind");
}

MlpModel::MlpModel(const Tensor2& x, std::vector<std::size_t> hidden,
                   std::uint64_t seed)
    : x_(x) {
  Rng rng(derive_seed(seed, "mlp/init"));
  std::size_t in = x.cols();
  for (const std::size_t width : hidden) {
    if (width == 0) throw std::invalid_argument("MlpModel: zero-width layer");
    hidden_.emplace_back(in, width);
    hidden_.back().init(rng);
    in = width;
  }
  out_ = nn::DenseLayer(in, 1);
  out_.init(rng);
}

std::vector<nn::Param*> MlpModel::parameters() {
  std::vector<nn::Param*> out;
  for (auto& layer : hidden_) {
    out.push_back(&layer.weight);
    out.push_back(&layer.bias);
  }
  out.push_back(&out_.weight);
  out.push_back(&out_.bias);
  return out;
}

std::vector<double> MlpModel::forward(std::span<const std::size_t> rows) {
  inputs_.clear();
  pre_.clear();
  Tensor2 h = gather(x_, rows);
  for (const auto& layer : hidden_) {
    pre_.push_back(layer.forward(h));
    inputs_.push_back(std::move(h));
    h = nn::gelu(pre_.back());
  }
  last_ = std::move(h);
  return column(out_.forward(last_));
}

void MlpModel::backward(std::span<const double> dlogits) {
  if (dlogits.size() != last_.rows()) {
    throw std::invalid_argument("MlpModel::backward: gradient count mismatch");
  }
  Tensor2 dh;
  out_.backward(last_, as_column(dlogits), &dh);
  for (std::size_t l = hidden_.size(); l-- > 0;) {
    const Tensor2 dpre = nn::gelu_backward(pre_[l], dh);
    hidden_[l].backward(inputs_[l], dpre, l > 0 ? &dh : nullptr);
  }
}

LinearProbe::LinearProbe(const Tensor2& x, std::uint64_t seed)
    : x_(x), out_(x.cols(), 1) {
  Rng rng(derive_seed(seed, "linear-probe/init"));
  out_.init(rng);
}

std::vector<nn::Param*> LinearProbe::parameters() {
  return {&out_.weight, &out_.bias};
}

std::vector<double> LinearProbe::forward(std::span<const std::size_t> rows) {
  input_ = gather(x_, rows);
  return column(out_.forward(input_));
}

void LinearProbe::backward(std::span<const double> dlogits) {
  if (dlogits.size() != input_.rows()) {
    throw std::invalid_argument("LinearProbe::backward: gradient count mismatch");
  }
  out_.backward(input_, as_column(dlogits), nullptr);
}

Conv1dLayer::Conv1dLayer(std::size_t in_channels, std::size_t out_channels,
                         std::size_t kernel)
    : weight(kernel * in_channels, out_channels),
      bias(1, out_channels),
      in_channels_(in_channels),
      out_channels_(out_channels),
      kernel_(kernel) {
  if (in_channels == 0 || out_channels == 0 || kernel == 0) {
    throw std::invalid_argument("Conv1dLayer: sizes must be positive");
  }
}

void Conv1dLayer::init(Rng& rng) {
  nn::glorot_uniform(weight.value, kernel_ * in_channels_,
                     kernel_ * out_channels_, rng);
  bias.value.fill(0.0);
}

Tensor2 Conv1dLayer::im2col(const Tensor2& x, std::size_t batch,
                            std::size_t length) const {
  if (length < kernel_) {
    throw std::invalid_argument("Conv1dLayer: signal length " +
                                std::to_string(length) +
                                " is shorter than the kernel");
  }
  if (x.rows() != batch * length || x.cols() != in_channels_) {
    throw std::invalid_argument("Conv1dLayer: input shape mismatch");
  }
  const std::size_t lo = out_length(length);
  const std::size_t width = kernel_ * in_channels_;
  Tensor2 col(batch * lo, width);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t p = 0; p < lo; ++p) {
      const double* src = x.data() + (b * length + p) * in_channels_;
      std::copy(src, src + width, col.row(b * lo + p).begin());
    }
  }
  return col;
}

Tensor2 Conv1dLayer::forward(const Tensor2& x, std::size_t batch,
                             std::size_t length) const {
  const Tensor2 col = im2col(x, batch, length);
  Tensor2 y(col.rows(), out_channels_);
  for (std::size_t i = 0; i < y.rows(); ++i) {
    std::copy(bias.value.data(), bias.value.data() + out_channels_,
              y.row(i).begin());
  }
  simd::gemm_nn(col.rows(), out_channels_, col.cols(), col.data(),
                weight.value.data(), y.data());
  return y;
}

void Conv1dLayer::backward(const Tensor2& x, std::size_t batch,
                           std::size_t length, const Tensor2& dy, Tensor2* dx) {
  const Tensor2 col = im2col(x, batch, length);
  if (dy.rows() != col.rows() || dy.cols() != out_channels_) {
    throw std::invalid_argument("Conv1dLayer::backward: shape mismatch");
  }
  simd::gemm_tn(col.rows(), out_channels_, col.cols(), col.data(), dy.data(),
                weight.grad.data());
  auto db = bias.grad.values();
  for (std::size_t i = 0; i < dy.rows(); ++i) simd::axpy(1.0, dy.row(i), db);
  if (dx == nullptr) return;

  Tensor2 dcol(col.rows(), col.cols());
  simd::gemm_nt(dy.rows(), out_channels_, col.cols(), dy.data(),
                weight.value.data(), dcol.data());
  *dx = Tensor2(x.rows(), x.cols());
  const std::size_t lo = out_length(length);
  const std::size_t width = kernel_ * in_channels_;
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t p = 0; p < lo; ++p) {
      std::span<double> dst(dx->data() + (b * length + p) * in_channels_,
                            width);
      simd::axpy(1.0, dcol.row(b * lo + p), dst);
    }
  }
}

Cnn1dModel::Cnn1dModel(const Tensor2& x, std::size_t kernel,
                       std::vector<std::size_t> channels, std::uint64_t seed)
    : x_(x) {
  if (channels.empty()) {
    throw std::invalid_argument("Cnn1dModel: need at least one conv layer");
  }
  const std::size_t shrink = channels.size() * (kernel - 1);
  if (kernel == 0 || x.cols() <= shrink) {
    throw std::invalid_argument("Cnn1dModel: embedding dim " +
                                std::to_string(x.cols()) +
                                " too short for the conv stack");
  }
  Rng rng(derive_seed(seed, "cnn1d/init"));
  std::size_t in = 1;
  for (const std::size_t ch : channels) {
    convs_.emplace_back(in, ch, kernel);
    convs_.back().init(rng);
    in = ch;
  }
  out_ = nn::DenseLayer((x.cols() - shrink) * channels.back(), 1);
  out_.init(rng);
}

std::vector<nn::Param*> Cnn1dModel::parameters() {
  std::vector<nn::Param*> out;
  for (auto& conv : convs_) {
    out.push_back(&conv.weight);
    out.push_back(&conv.bias);
  }
  out.push_back(&out_.weight);
  out.push_back(&out_.bias);
  return out;
}

std::vector<double> Cnn1dModel::forward(std::span<const std::size_t> rows) {
  batch_ = rows.size();
  inputs_.clear();
  pre_.clear();
  std::size_t length = x_.cols();
  Tensor2 h = reshape(gather(x_, rows), batch_ * length, 1);
  for (const auto& conv : convs_) {
    pre_.push_back(conv.forward(h, batch_, length));
    inputs_.push_back(std::move(h));
    h = nn::gelu(pre_.back());
    length = conv.out_length(length);
  }
  flat_ = reshape(std::move(h), batch_, length * convs_.back().out_channels());
  return column(out_.forward(flat_));
}

void Cnn1dModel::backward(std::span<const double> dlogits) {
  if (dlogits.size() != batch_) {
    throw std::invalid_argument("Cnn1dModel::backward: gradient count mismatch");
  }
  Tensor2 dflat;
  out_.backward(flat_, as_column(dlogits), &dflat);
  Tensor2 dh = reshape(std::move(dflat), pre_.back().rows(),
                       pre_.back().cols());
  for (std::size_t l = convs_.size(); l-- > 0;) {
    const Tensor2 dpre = nn::gelu_backward(pre_[l], dh);
    const std::size_t length = inputs_[l].rows() / batch_;
    convs_[l].backward(inputs_[l], batch_, length, dpre,
                       l > 0 ? &dh : nullptr);
  }
}

std::unique_ptr<model::Classifier> make_baseline(BaselineKind kind,
                                                 const Tensor2& x,
                                                 std::uint64_t seed) {
  switch (kind) {
    case BaselineKind::kMlp:
      return std::make_unique<MlpModel>(x, std::vector<std::size_t>{32, 32},
                                        seed);
    case BaselineKind::kCnn1d:
      return std::make_unique<Cnn1dModel>(x, 3, std::vector<std::size_t>{8, 16},
                                          seed);
    case BaselineKind::kLinearProbe:
      return std::make_unique<LinearProbe>(x, seed);
  }
  throw std::logic_error("unknown baseline kind");
}

}  // namespace engage::baselines
