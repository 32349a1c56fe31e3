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

#include "engage/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "engage/common/random.hpp"

namespace engage::synth {

namespace {

constexpr std::int64_t kWeekSeconds = 7 * 86400;
constexpr std::int64_t kBurstSeconds = 3600;

struct Author {
  std::string name;
  std::uint64_t followers = 0;
  std::uint64_t following = 0;
  std::uint64_t n_tweets = 0;
  bool verified = false;
};

std::uint64_t lognormal_count(Rng& rng, double mu, double sigma) {
  return static_cast<std::uint64_t>(std::floor(std::exp(mu + sigma * rng.normal())));
}

// Inverse-CDF sampler for a Zipf(1) law over `n` ranks.
class Zipf {
 public:
  explicit Zipf(std::size_t n) : cdf_(n) {
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      total += 1.0 / static_cast<double>(k + 1);
      cdf_[k] = total;
    }
    for (auto& v : cdf_) v /= total;
  }

  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()),
                                 cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace

std::vector<ingest::TweetRecord> generate(const SynthConfig& config) {
  if (config.n_posts < 10) {
    throw std::invalid_argument("synth: need at least 10 posts");
  }
  if (!(config.homophily >= 0.0 && config.homophily <= 1.0)) {
    throw std::invalid_argument("synth: homophily must lie in [0, 1]");
  }
  if (config.groups < 2 || config.burst_size == 0 || config.group_tags == 0 ||
      config.shared_tags == 0 || config.vocabulary == 0) {
    throw std::invalid_argument("synth: group, tag and vocabulary sizes must be positive");
  }
  const std::size_t n = config.n_posts;
  const std::size_t n_groups = std::min(config.groups, n / 5);
  Rng rng(derive_seed(config.seed, "synth"));

  // Group membership: balanced, shuffled; half of the groups are engaging.
  std::vector<std::size_t> group(n);
  for (std::size_t i = 0; i < n; ++i) group[i] = i % n_groups;
  rng.shuffle(std::span<std::size_t>(group));
  std::vector<std::size_t> group_order(n_groups);
  std::iota(group_order.begin(), group_order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(group_order));
  std::vector<int> engaging(n_groups, 0);
  for (std::size_t g = 0; g < n_groups / 2; ++g) engaging[group_order[g]] = 1;

  // Each group posts in a few one-hour bursts spread over the week.
  const std::size_t bursts =
      std::max<std::size_t>(1, n / (n_groups * config.burst_size));
  std::vector<std::vector<std::int64_t>> burst_start(n_groups);
  for (auto& starts : burst_start) {
    for (std::size_t b = 0; b < bursts; ++b) {
      starts.push_back(static_cast<std::int64_t>(
          rng.uniform(0.0, static_cast<double>(kWeekSeconds - kBurstSeconds))));
    }
  }

  // Authors belong to one group; roughly two posts per author.
  const std::size_t per_group = std::max<std::size_t>(1, n / n_groups / 2);
  std::vector<std::vector<Author>> authors(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    const double shift = config.follower_shift * (engaging[g] ? 1.0 : -1.0);
    for (std::size_t a = 0; a < per_group; ++a) {
      Author author;
      author.name = "user" + std::to_string(g * per_group + a);
      author.followers = lognormal_count(rng, 6.0 + shift, 1.5);
      author.n_tweets = lognormal_count(rng, 7.0, 1.0);
      author.following = lognormal_count(rng, 5.0, 1.0);
      author.verified = rng.uniform() < 0.05;
      authors[g].push_back(std::move(author));
    }
  }

  const Zipf zipf(config.vocabulary);
  std::vector<ingest::TweetRecord> records(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t g = group[i];
    auto& r = records[i];
    const Author& author = authors[g][rng.index(authors[g].size())];
    r.author = author.name;
    r.followers = author.followers;
    r.following = author.following;
    r.n_tweets = author.n_tweets;
    r.verified_user = author.verified;

    const auto& starts = burst_start[g];
    r.timestamp = config.start_time + starts[rng.index(starts.size())] +
                  static_cast<std::int64_t>(rng.index(kBurstSeconds));

    const std::size_t n_tags = 1 + rng.index(3);
    for (std::size_t t = 0; t < n_tags; ++t) {
      if (rng.uniform() < config.homophily) {
        r.hashtags.insert("topic" + std::to_string(g) + "x" +
                          std::to_string(rng.index(config.group_tags)));
      } else {
        r.hashtags.insert("trend" +
                          std::to_string(rng.index(config.shared_tags)));
      }
    }
    r.n_hashtags = r.hashtags.size();

    const double kind = rng.uniform();
    const bool official = kind < config.official_rate;
    const bool marked =
        !official && kind < config.official_rate + config.marker_rate;
    r.official_source = official;

    const std::size_t n_words = 6 + rng.index(9);
    std::vector<std::string> words;
    for (std::size_t w = 0; w < n_words; ++w) {
      if (rng.uniform() < config.community_word_rate) {
        words.push_back("g" + std::to_string(g) + "w" +
                        std::to_string(rng.index(6)));
      } else {
        words.push_back("w" + std::to_string(zipf.draw(rng)));
      }
    }
    if (marked) {
      for (std::size_t m = 0; m < config.marker_repeats; ++m) {
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(
                                         rng.index(words.size() + 1)),
                     kMarkerWord);
      }
    }
    for (const auto& w : words) {
      if (!r.text.empty()) r.text.push_back(' ');
      r.text += w;
    }
    r.length_of_post = ingest::utf8_length(r.text);

    r.has_media = rng.uniform() < 0.5;
    r.n_mentions = rng.poisson(0.5);
    r.emojis = rng.poisson(0.3);

    const int label = official ? 1 : (marked ? 0 : engaging[g]);
    if (label == 1) {
      r.favorite_count = 1 + rng.poisson(3.0);
      r.retweet_count = rng.poisson(1.0);
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].timestamp < records[b].timestamp;
  });
  std::vector<ingest::TweetRecord> sorted;
  sorted.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    sorted.push_back(std::move(records[order[k]]));
    char id[32];
    std::snprintf(id, sizeof(id), "s%06zu", k);
    sorted.back().id = id;
  }
  return sorted;
}

void write_corpus(const std::string& path,
                  const std::vector<ingest::TweetRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus " + path);
  for (const auto& r : records) out << ingest::serialize_record(r) << '\n';
  if (!out) throw std::runtime_error("failed writing corpus " + path);
}

}  // namespace engage::synth
