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

#ifndef ENGAGE_MODEL_CLASSIFIER_HPP_
#define ENGAGE_MODEL_CLASSIFIER_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "engage/nn/checkpoint.hpp"
#include "engage/nn/layers.hpp"

namespace engage::model {

// A node classifier over a fixed input set. forward() computes logits for a
// subset of nodes and caches what backward() needs; backward() accumulates
// parameter gradients for that same subset.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::string_view kind() const = 0;
  virtual std::size_t n_nodes() const = 0;

  // Weight/bias pairs in layer order.
  virtual std::vector<nn::Param*> parameters() = 0;

  virtual std::vector<double> forward(std::span<const std::size_t> rows) = 0;
  virtual void backward(std::span<const double> dlogits) = 0;

  void zero_grad();
  std::size_t parameter_count();
};

// Logits for every node.
std::vector<double> predict_logits(Classifier& model);

// sigmoid(logits) for every node.
std::vector<double> predict_proba(Classifier& model);

// Checkpoint bridge: parameters() read as consecutive (weight, bias) pairs.
std::vector<nn::LayerBlob> export_layers(Classifier& model);
// Throws std::runtime_error when layer count or shapes differ.
void import_layers(Classifier& model, const std::vector<nn::LayerBlob>& layers);

struct TrainConfig {
  double lr = 0.01;
  std::size_t batch_size = 256;
  std::size_t max_epochs = 200;
  std::size_t plateau_patience = 5;
  double plateau_factor = 0.1;
  double min_lr = 1e-6;
  std::size_t early_stop_patience = 10;
  double min_delta = 1e-4;
  double pos_weight = 1.0;
  std::uint64_t seed = 0;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;  // mean of the epoch's minibatch losses
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  double lr = 0.0;  // rate used during the epoch
};

struct TrainResult {
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double best_val_loss = 0.0;
};

// Adam on shuffled minibatches of training nodes; validation loss drives the
// plateau scheduler and early stopping. Restores the best-validation
// parameters before returning. Throws std::runtime_error naming the epoch if
// the loss becomes non-finite.
TrainResult train(Classifier& model, std::span<const int> labels,
                  std::span<const std::size_t> train_rows,
                  std::span<const std::size_t> val_rows,
                  const TrainConfig& config);

void write_history_csv(const std::string& path,
                       const std::vector<EpochRecord>& history);

struct GradientCheckResult {
  double max_relative_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t n_checked = 0;
  std::size_t n_relative = 0;  // entries beyond the absolute tolerance
};

// Central differences with step h on the mean BCE over `rows`, compared with
// the analytic gradient for every parameter entry. Entries whose analytic
// and numeric values differ by at most `abs_tolerance` count as matches; the
// rest contribute |a - f| / max(|a|, |f|).
GradientCheckResult gradient_check(Classifier& model,
                                   std::span<const std::size_t> rows,
                                   std::span<const int> labels, double h = 1e-5,
                                   double abs_tolerance = 1e-8);

}  // namespace engage::model

#endif  // ENGAGE_MODEL_CLASSIFIER_HPP_
