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

#ifndef ENGAGE_INGEST_HPP_
#define ENGAGE_INGEST_HPP_

#include <cstdint>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace engage::ingest {

// One post plus the profile counters of its author.
struct TweetRecord {
  std::string id;
  std::int64_t timestamp = 0;  // seconds since epoch, UTC
  std::string lang = "en";
  std::string text;
  std::uint64_t length_of_post = 0;  // code points in `text`
  std::uint64_t emojis = 0;
  std::string author;
  bool has_media = false;
  std::uint64_t favorite_count = 0;
  std::uint64_t retweet_count = 0;
  bool official_source = false;
  std::set<std::string> hashtags;  // lowercase, without '#'
  std::uint64_t n_hashtags = 0;
  std::uint64_t n_mentions = 0;
  bool verified_user = false;
  std::uint64_t followers = 0;
  std::uint64_t following = 0;
  std::uint64_t n_tweets = 0;

  bool operator==(const TweetRecord&) const = default;
};

struct ParseResult {
  std::vector<TweetRecord> records;
  std::size_t malformed = 0;     // lines skipped as unparseable
  std::size_t filtered_lang = 0;  // well-formed lines with lang != "en"
  std::vector<std::string> warnings;  // first few malformed-line messages
};

// Line-delimited JSON, one record per line. Blank lines are ignored.
ParseResult parse_corpus(std::istream& in);
ParseResult parse_corpus_file(const std::string& path);

// Parses one JSON line. Throws std::invalid_argument when malformed.
TweetRecord parse_record(std::string_view line);

// Inverse of parse_record for well-formed records.
std::string serialize_record(const TweetRecord& record);

// Epoch seconds, or ISO-8601 "YYYY-MM-DDTHH:MM:SS[.frac][Z|+HH:MM|-HH:MM]".
std::int64_t parse_timestamp(std::string_view text);

std::uint64_t utf8_length(std::string_view text);

// Lowercases ASCII, strips leading '#', trims whitespace.
std::string normalize_hashtag(std::string_view tag);

std::uint64_t compute_engagement(const TweetRecord& record);
int assign_label(std::uint64_t engagement);

struct DatasetStats {
  std::uint64_t n_days = 0;
  std::uint64_t n_users = 0;
  std::uint64_t n_posts = 0;
  double mean_posts_per_day = 0.0;
  std::uint64_t n_unique_hashtags = 0;
  double median_posts_per_user = 0.0;
  std::uint64_t max_posts_per_user = 0;
};

// n_days counts distinct UTC calendar days that carry at least one post.
// Throws std::invalid_argument("empty corpus") on an empty list.
DatasetStats dataset_stats(const std::vector<TweetRecord>& records);

// Records with start <= timestamp < end, order preserved.
std::vector<TweetRecord> filter_window(const std::vector<TweetRecord>& records,
                                       std::int64_t start, std::int64_t end);

}  // namespace engage::ingest

#endif  // ENGAGE_INGEST_HPP_
