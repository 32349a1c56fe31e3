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

#include "engage/nn/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace engage::nn {

Adam::Adam(std::vector<Param*> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const Param* p : params_) {
    m_.emplace_back(p->value.rows(), p->value.cols());
    v_.emplace_back(p->value.rows(), p->value.cols());
  }
}

void Adam::step() {
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    double* w = params_[k]->value.data();
    const double* g = params_[k]->grad.data();
    double* m = m_[k].data();
    double* v = v_[k].data();
    const std::size_t n = params_[k]->value.size();
    for (std::size_t i = 0; i < n; ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      w[i] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

PlateauScheduler::PlateauScheduler(double lr, std::size_t patience,
                                   double factor, double min_lr,
                                   double min_delta)
    : lr_(lr),
      patience_(patience),
      factor_(factor),
      min_lr_(min_lr),
      min_delta_(min_delta),
      best_(std::numeric_limits<double>::infinity()) {}

double PlateauScheduler::step(double metric) {
  if (metric <= best_ - min_delta_) {
    best_ = metric;
    wait_ = 0;
    return lr_;
  }
  ++wait_;
  if (wait_ >= patience_) {
    lr_ = std::max(lr_ * factor_, min_lr_);
    wait_ = 0;
  }
  return lr_;
}

EarlyStopping::EarlyStopping(std::size_t patience, double min_delta)
    : patience_(patience),
      min_delta_(min_delta),
      best_(std::numeric_limits<double>::infinity()) {}

bool EarlyStopping::update(double metric) {
  if (metric <= best_ - min_delta_) {
    best_ = metric;
    wait_ = 0;
    improved_ = true;
    return false;
  }
  improved_ = false;
  ++wait_;
  return wait_ >= patience_;
}

}  // namespace engage::nn
