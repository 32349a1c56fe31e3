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

#include "engage/nn/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "engage/common/binary_io.hpp"

namespace engage::nn {

void write_checkpoint(const std::string& path,
                      const std::vector<LayerBlob>& layers) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  io::write_magic(out, "TGM1");
  io::write_u32(out, static_cast<std::uint32_t>(layers.size()));
  for (const auto& layer : layers) {
    io::write_u32(out, static_cast<std::uint32_t>(layer.weight.rows()));
    io::write_u32(out, static_cast<std::uint32_t>(layer.weight.cols()));
    for (const double v : layer.weight.values()) io::write_f64(out, v);
    io::write_u32(out, static_cast<std::uint32_t>(layer.bias.size()));
    for (const double v : layer.bias) io::write_f64(out, v);
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<LayerBlob> read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  io::expect_magic(in, "TGM1", path);
  const std::uint32_t count = io::read_u32(in, "layer count");
  std::vector<LayerBlob> layers;
  layers.reserve(count);
  for (std::uint32_t l = 0; l < count; ++l) {
    const std::uint32_t rows = io::read_u32(in, "weight rows");
    const std::uint32_t cols = io::read_u32(in, "weight cols");
    std::vector<double> w(static_cast<std::size_t>(rows) * cols);
    for (double& v : w) v = io::read_f64(in, "weights");
    LayerBlob blob{Tensor2(rows, cols, std::move(w)), {}};
    blob.bias.resize(io::read_u32(in, "bias length"));
    for (double& v : blob.bias) v = io::read_f64(in, "biases");
    layers.push_back(std::move(blob));
  }
  return layers;
}

}  // namespace engage::nn
