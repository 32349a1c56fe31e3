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

#ifndef ENGAGE_SYNTH_HPP_
#define ENGAGE_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "engage/ingest.hpp"

namespace engage::synth {

// Planted-homophily corpus generator. Posts belong to latent topic groups,
// half of which are engaging. Each hashtag is drawn from the post's group
// pool with probability `homophily`, otherwise from a shared pool, so the
// parameter sets how often hashtag neighbors share the post's group. Group
// activity arrives in one-hour bursts spread over a week.
//
// Labels follow the group except for two small override slices: posts from
// an official source are always engaged, and posts carrying the marker word
// never are. Author follower counts shift slightly with the group's class.
struct SynthConfig {
  std::size_t n_posts = 1000;
  double homophily = 0.9;
  std::uint64_t seed = 7;
  std::size_t groups = 20;
  std::size_t burst_size = 40;
  std::size_t group_tags = 5;
  std::size_t shared_tags = 60;
  std::size_t vocabulary = 1500;
  double community_word_rate = 0.03;
  double official_rate = 0.05;
  double marker_rate = 0.10;
  std::size_t marker_repeats = 3;
  double follower_shift = 0.5;  // log-scale shift between classes
  std::int64_t start_time = 1635724800;  // 2021-11-01T00:00:00Z
};

inline constexpr const char* kMarkerWord = "meh";

// Deterministic in the config. Records are sorted by timestamp. Throws
// std::invalid_argument when n_posts < 10 or homophily is outside [0, 1].
std::vector<ingest::TweetRecord> generate(const SynthConfig& config);

void write_corpus(const std::string& path,
                  const std::vector<ingest::TweetRecord>& records);

}  // namespace engage::synth

#endif  // ENGAGE_SYNTH_HPP_
