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

#include "engage/model/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "engage/common/random.hpp"
#include "engage/nn/optim.hpp"

namespace engage::model {

namespace {

constexpr std::size_t kPredictChunk = 4096;

double accuracy_at_half(std::span<const double> logits,
                        std::span<const int> labels) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if ((logits[i] > 0.0 ? 1 : 0) == labels[i]) ++hits;
  }
  return logits.empty() ? 0.0
                        : static_cast<double>(hits) /
                              static_cast<double>(logits.size());
}

std::vector<int> gather_labels(std::span<const int> labels,
                               std::span<const std::size_t> rows) {
  std::vector<int> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = labels[rows[i]];
  return out;
}

double loss_on(Classifier& model, std::span<const std::size_t> rows,
               std::span<const int> row_labels, double pos_weight) {
  return nn::bce_with_logits(model.forward(rows), row_labels, pos_weight).loss;
}

}  // namespace

void Classifier::zero_grad() {
  for (auto* p : parameters()) p->zero_grad();
}

std::size_t Classifier::parameter_count() {
  std::size_t n = 0;
  for (auto* p : parameters()) n += p->value.size();
  return n;
}

std::vector<double> predict_logits(Classifier& model) {
  // Graph models see the whole receptive field either way, so chunking only
  // bounds the size of per-call caches.
  const std::size_t n = model.n_nodes();
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t start = 0; start < n; start += kPredictChunk) {
    const std::size_t len = std::min(kPredictChunk, n - start);
    const auto part = model.forward(std::span(rows).subspan(start, len));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<double> predict_proba(Classifier& model) {
  auto out = predict_logits(model);
  for (auto& v : out) v = nn::sigmoid(v);
  return out;
}

std::vector<nn::LayerBlob> export_layers(Classifier& model) {
  const auto params = model.parameters();
  if (params.size() % 2 != 0) {
    throw std::logic_error("export_layers: parameters are not weight/bias pairs");
  }
  std::vector<nn::LayerBlob> out;
  for (std::size_t i = 0; i < params.size(); i += 2) {
    const auto bias = params[i + 1]->value.values();
    out.push_back({params[i]->value, {bias.begin(), bias.end()}});
  }
  return out;
}

void import_layers(Classifier& model, const std::vector<nn::LayerBlob>& layers) {
  const auto params = model.parameters();
  if (params.size() != 2 * layers.size()) {
    throw std::runtime_error("checkpoint has " + std::to_string(layers.size()) +
                             " layers, model expects " +
                             std::to_string(params.size() / 2));
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto& w = params[2 * l]->value;
    auto& b = params[2 * l + 1]->value;
    if (layers[l].weight.rows() != w.rows() ||
        layers[l].weight.cols() != w.cols() ||
        layers[l].bias.size() != b.size()) {
      throw std::runtime_error("checkpoint layer " + std::to_string(l) +
                               " shape does not match the model");
    }
    w = layers[l].weight;
    std::copy(layers[l].bias.begin(), layers[l].bias.end(), b.data());
  }
}

TrainResult train(Classifier& model, std::span<const int> labels,
                  std::span<const std::size_t> train_rows,
                  std::span<const std::size_t> val_rows,
                  const TrainConfig& config) {
  if (train_rows.empty() || val_rows.empty()) {
    throw std::invalid_argument("train: train and validation sets must be non-empty");
  }
  if (labels.size() != model.n_nodes()) {
    throw std::invalid_argument("train: label count does not match node count");
  }
  if (config.batch_size == 0) {
    throw std::invalid_argument("train: batch size must be positive");
  }
  const auto params = model.parameters();
  nn::Adam adam(params, {.lr = config.lr});
  nn::PlateauScheduler plateau(config.lr, config.plateau_patience,
                               config.plateau_factor, config.min_lr,
                               config.min_delta);
  nn::EarlyStopping stopper(config.early_stop_patience, config.min_delta);
  Rng rng(derive_seed(config.seed, "train/shuffle"));

  const std::vector<int> val_labels = gather_labels(labels, val_rows);
  std::vector<std::size_t> order(train_rows.begin(), train_rows.end());
  std::vector<nn::Tensor2> best;
  auto snapshot = [&] {
    best.clear();
    for (auto* p : params) best.push_back(p->value);
  };
  snapshot();

  TrainResult result;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    const double epoch_lr = adam.lr();
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t len = std::min(config.batch_size, order.size() - start);
      const auto batch = std::span<const std::size_t>(order).subspan(start, len);
      const auto batch_labels = gather_labels(labels, batch);
      model.zero_grad();
      const auto logits = model.forward(batch);
      const auto bce = nn::bce_with_logits(logits, batch_labels, config.pos_weight);
      if (!std::isfinite(bce.loss)) {
        throw std::runtime_error("training diverged at epoch " +
                                 std::to_string(epoch) +
                                 " (non-finite loss)");
      }
      model.backward(bce.grad);
      adam.step();
      loss_sum += bce.loss;
      ++batches;
    }

    const auto val_logits = model.forward(val_rows);
    const double val_loss =
        nn::bce_with_logits(val_logits, val_labels, config.pos_weight).loss;
    if (!std::isfinite(val_loss)) {
      throw std::runtime_error("training diverged at epoch " +
                               std::to_string(epoch) +
                               " (non-finite validation loss)");
    }
    result.history.push_back({epoch, loss_sum / static_cast<double>(batches),
                              val_loss, accuracy_at_half(val_logits, val_labels),
                              epoch_lr});

    adam.set_lr(plateau.step(val_loss));
    const bool stop = stopper.update(val_loss);
    if (stopper.improved()) {
      snapshot();
      result.best_epoch = epoch;
      result.best_val_loss = val_loss;
    }
    if (stop) break;
  }
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = best[i];
  return result;
}

void write_history_csv(const std::string& path,
                       const std::vector<EpochRecord>& history) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write history " + path);
  out << "epoch,train_loss,val_loss,val_accuracy,lr\n";
  char buf[160];
  for (const auto& r : history) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g\n", r.epoch,
                  r.train_loss, r.val_loss, r.val_accuracy, r.lr);
    out << buf;
  }
  if (!out) throw std::runtime_error("failed writing history " + path);
}

GradientCheckResult gradient_check(Classifier& model,
                                   std::span<const std::size_t> rows,
                                   std::span<const int> labels, double h,
                                   double abs_tolerance) {
  const auto row_labels = gather_labels(labels, rows);
  model.zero_grad();
  const auto bce = nn::bce_with_logits(model.forward(rows), row_labels);
  model.backward(bce.grad);

  GradientCheckResult result;
  for (auto* p : model.parameters()) {
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      double& w = p->value.data()[i];
      const double saved = w;
      w = saved + h;
      const double up = loss_on(model, rows, row_labels, 1.0);
      w = saved - h;
      const double down = loss_on(model, rows, row_labels, 1.0);
      w = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double analytic = p->grad.data()[i];
      const double diff = std::abs(analytic - numeric);
      result.max_abs_error = std::max(result.max_abs_error, diff);
      if (diff > abs_tolerance) {
        const double scale = std::max(std::abs(analytic), std::abs(numeric));
        result.max_relative_error =
            std::max(result.max_relative_error, diff / scale);
        ++result.n_relative;
      }
      ++result.n_checked;
    }
  }
  return result;
}

}  // namespace engage::model
