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

#ifndef ENGAGE_NN_OPTIM_HPP_
#define ENGAGE_NN_OPTIM_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "engage/nn/layers.hpp"

namespace engage::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. Holds one pair of moment buffers per parameter.
class Adam {
 public:
  Adam(std::vector<Param*> params, AdamConfig config);

  void step();

  double lr() const { return config_.lr; }
  void set_lr(double lr) { config_.lr = lr; }
  std::uint64_t steps() const { return t_; }

 private:
  std::vector<Param*> params_;
  std::vector<Tensor2> m_;
  std::vector<Tensor2> v_;
  AdamConfig config_;
  std::uint64_t t_ = 0;
};

// Reduce-on-plateau for a metric that should decrease (validation loss).
class PlateauScheduler {
 public:
  PlateauScheduler(double lr, std::size_t patience, double factor = 0.1,
                   double min_lr = 1e-6, double min_delta = 1e-4);

  // Feeds one validation metric; returns the learning rate to use next.
  double step(double metric);

  double lr() const { return lr_; }
  std::size_t wait() const { return wait_; }

 private:
  double lr_;
  std::size_t patience_;
  double factor_;
  double min_lr_;
  double min_delta_;
  double best_;
  std::size_t wait_ = 0;
};

// Stops after `patience` consecutive evaluations without an improvement of
// at least `min_delta` over the best value so far.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience, double min_delta = 1e-4);

  // Returns true when training should stop.
  bool update(double metric);

  bool improved() const { return improved_; }
  double best() const { return best_; }
  std::size_t wait() const { return wait_; }

 private:
  std::size_t patience_;
  double min_delta_;
  double best_;
  std::size_t wait_ = 0;
  bool improved_ = false;
};

}  // namespace engage::nn

#endif  // ENGAGE_NN_OPTIM_HPP_
