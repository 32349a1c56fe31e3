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

#ifndef ENGAGE_NN_CHECKPOINT_HPP_
#define ENGAGE_NN_CHECKPOINT_HPP_

#include <string>
#include <vector>

#include "engage/nn/tensor.hpp"

namespace engage::nn {

// One layer in a TGM1 checkpoint: a weight matrix and a bias row.
struct LayerBlob {
  Tensor2 weight;
  std::vector<double> bias;
};

// TGM1 layout, little-endian:
//   "TGM1" | u32 layer count | per layer: u32 rows, u32 cols,
//   rows*cols f64 weights, u32 bias length, f64 biases
void write_checkpoint(const std::string& path,
                      const std::vector<LayerBlob>& layers);
std::vector<LayerBlob> read_checkpoint(const std::string& path);

}  // namespace engage::nn

#endif  // ENGAGE_NN_CHECKPOINT_HPP_
