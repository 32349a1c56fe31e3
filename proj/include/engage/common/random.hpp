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

#ifndef ENGAGE_COMMON_RANDOM_HPP_
#define ENGAGE_COMMON_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace engage {

// Seeded generator with platform-independent draws. The standard
// distributions are implementation-defined, so artifacts that must be
// byte-identical across toolchains draw through these helpers instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t index(std::uint64_t n);

  // Standard normal via Box-Muller.
  double normal();

  double exponential(double rate);

  // Poisson draw by inversion; fine for the small means used here.
  std::uint64_t poisson(double mean);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Named sub-seed derived from a master seed, so stages draw independent
// streams that do not shift when another stage changes its draw count.
std::uint64_t derive_seed(std::uint64_t master, std::string_view name);

// 64-bit FNV-1a followed by a splitmix64 finalizer.
std::uint64_t hash64(std::string_view bytes, std::uint64_t seed);

}  // namespace engage

#endif  // ENGAGE_COMMON_RANDOM_HPP_
