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

#include "engage/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace engage::ingest {

namespace {

using nlohmann::json;

constexpr std::size_t kMaxWarnings = 20;

[[noreturn]] void malformed(const std::string& why) {
  throw std::invalid_argument(why);
}

int parse_int(std::string_view s, std::size_t pos, std::size_t len) {
  if (pos + len > s.size()) malformed("timestamp too short");
  int v = 0;
  const auto* first = s.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + len, v);
  if (ec != std::errc() || ptr != first + len) {
    malformed("bad digits in timestamp: " + std::string(s));
  }
  return v;
}

std::string as_string(const json& v, const char* field) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  malformed(std::string("field '") + field + "' must be a string or integer");
}

std::uint64_t as_count(const json& obj, const char* field) {
  const auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return 0;
  if (it->is_number_unsigned()) return it->get<std::uint64_t>();
  if (it->is_number_integer()) {
    const auto v = it->get<std::int64_t>();
    if (v < 0) malformed(std::string("negative ") + field);
    return static_cast<std::uint64_t>(v);
  }
  if (it->is_number_float()) {
    const double v = it->get<double>();
    if (v < 0 || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
      malformed(std::string("field '") + field + "' is not a count");
    }
    return static_cast<std::uint64_t>(v);
  }
  if (it->is_string()) {
    const auto s = it->get<std::string>();
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      malformed(std::string("field '") + field + "' is not a count");
    }
    return v;
  }
  malformed(std::string("field '") + field + "' is not a count");
}

bool as_flag(const json& obj, const char* field) {
  const auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return false;
  if (it->is_boolean()) return it->get<bool>();
  const auto v = as_count(obj, field);
  if (v > 1) malformed(std::string("field '") + field + "' must be 0 or 1");
  return v == 1;
}

void add_hashtag(std::set<std::string>& out, std::string_view raw) {
  std::string tag = normalize_hashtag(raw);
  if (!tag.empty()) out.insert(std::move(tag));
}

}  // namespace

std::string normalize_hashtag(std::string_view tag) {
  std::string out;
  out.reserve(tag.size());
  for (const char ch : tag) {
    const auto uc = static_cast<unsigned char>(ch);
    if (std::isspace(uc) || ch == ',') continue;
    out.push_back(static_cast<char>(std::tolower(uc)));
  }
  const auto first = out.find_first_not_of('#');
  return first == std::string::npos ? std::string() : out.substr(first);
}

std::uint64_t utf8_length(std::string_view text) {
  std::uint64_t n = 0;
  for (const char ch : text) {
    if ((static_cast<unsigned char>(ch) & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::int64_t parse_timestamp(std::string_view text) {
  if (text.empty()) malformed("empty timestamp");
  const bool all_digits =
      std::all_of(text.begin() + (text[0] == '-' ? 1 : 0), text.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  if (all_digits) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      malformed("bad epoch timestamp: " + std::string(text));
    }
    return v;
  }
  // YYYY-MM-DDTHH:MM:SS
  if (text.size() < 19 || text[4] != '-' || text[7] != '-' ||
      (text[10] != 'T' && text[10] != ' ') || text[13] != ':' ||
      text[16] != ':') {
    malformed("unrecognized timestamp: " + std::string(text));
  }
  using namespace std::chrono;
  const year_month_day ymd{year{parse_int(text, 0, 4)},
                           month{static_cast<unsigned>(parse_int(text, 5, 2))},
                           day{static_cast<unsigned>(parse_int(text, 8, 2))}};
  if (!ymd.ok()) malformed("invalid date: " + std::string(text));
  const int hh = parse_int(text, 11, 2);
  const int mm = parse_int(text, 14, 2);
  const int ss = parse_int(text, 17, 2);
  if (hh > 23 || mm > 59 || ss > 60) {
    malformed("invalid time of day: " + std::string(text));
  }
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }
  std::int64_t offset = 0;
  if (pos < text.size()) {
    const char zone = text[pos];
    if (zone == 'Z' && pos + 1 == text.size()) {
      offset = 0;
    } else if (zone == '+' || zone == '-') {
      const std::string_view rest = text.substr(pos + 1);
      int oh = 0;
      int om = 0;
      if (rest.size() == 5 && rest[2] == ':') {
        oh = parse_int(rest, 0, 2);
        om = parse_int(rest, 3, 2);
      } else if (rest.size() == 4) {
        oh = parse_int(rest, 0, 2);
        om = parse_int(rest, 2, 2);
      } else if (rest.size() == 2) {
        oh = parse_int(rest, 0, 2);
      } else {
        malformed("bad UTC offset: " + std::string(text));
      }
      offset = (zone == '+' ? 1 : -1) * (oh * 3600 + om * 60);
    } else {
      malformed("trailing characters in timestamp: " + std::string(text));
    }
  }
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 86400 + hh * 3600 + mm * 60 + ss -
         offset;
}

TweetRecord parse_record(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) malformed("record is not a JSON object");

  TweetRecord r;
  const auto id = obj.find("id");
  if (id == obj.end() || id->is_null()) malformed("missing id");
  r.id = as_string(*id, "id");
  if (r.id.empty()) malformed("empty id");

  const auto ts = obj.find("timestamp");
  if (ts == obj.end() || ts->is_null()) malformed("missing timestamp");
  if (ts->is_number_integer()) {
    r.timestamp = ts->get<std::int64_t>();
  } else if (ts->is_string()) {
    r.timestamp = parse_timestamp(ts->get<std::string>());
  } else {
    malformed("timestamp must be epoch seconds or an ISO-8601 string");
  }

  if (const auto it = obj.find("lang"); it != obj.end() && !it->is_null()) {
    r.lang = as_string(*it, "lang");
  }
  if (const auto it = obj.find("text"); it != obj.end() && !it->is_null()) {
    r.text = as_string(*it, "text");
  }
  if (const auto it = obj.find("author"); it != obj.end() && !it->is_null()) {
    r.author = as_string(*it, "author");
  }
  r.length_of_post = utf8_length(r.text);
  r.favorite_count = as_count(obj, "favorite_count");
  r.retweet_count = as_count(obj, "retweet_count");
  r.has_media = as_flag(obj, "has_media");
  r.official_source = as_flag(obj, "official_source");
  r.verified_user = as_flag(obj, "verified");
  r.followers = as_count(obj, "followers");
  r.following = as_count(obj, "following");
  r.n_tweets = as_count(obj, "n_tweets");
  r.n_mentions = as_count(obj, "n_mentions");
  r.emojis = as_count(obj, "emojis");

  if (const auto it = obj.find("hashtags"); it != obj.end() && !it->is_null()) {
    if (it->is_string()) {
      const auto joined = it->get<std::string>();
      std::size_t start = 0;
      while (start <= joined.size()) {
        const auto comma = joined.find(',', start);
        const auto end = comma == std::string::npos ? joined.size() : comma;
        add_hashtag(r.hashtags,
                    std::string_view(joined).substr(start, end - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    } else if (it->is_array()) {
      for (const auto& tag : *it) {
        if (!tag.is_string()) malformed("hashtag entries must be strings");
        add_hashtag(r.hashtags, tag.get<std::string>());
      }
    } else {
      malformed("hashtags must be a comma-separated string or an array");
    }
  }
  r.n_hashtags = r.hashtags.size();
  return r;
}

std::string serialize_record(const TweetRecord& r) {
  std::string tags;
  for (const auto& t : r.hashtags) {
    if (!tags.empty()) tags.push_back(',');
    tags += t;
  }
  nlohmann::ordered_json obj;
  obj["id"] = r.id;
  obj["timestamp"] = r.timestamp;
  obj["lang"] = r.lang;
  obj["text"] = r.text;
  obj["author"] = r.author;
  obj["favorite_count"] = r.favorite_count;
  obj["retweet_count"] = r.retweet_count;
  obj["has_media"] = r.has_media ? 1 : 0;
  obj["official_source"] = r.official_source ? 1 : 0;
  obj["verified"] = r.verified_user ? 1 : 0;
  obj["followers"] = r.followers;
  obj["following"] = r.following;
  obj["n_tweets"] = r.n_tweets;
  obj["hashtags"] = tags;
  obj["n_mentions"] = r.n_mentions;
  obj["emojis"] = r.emojis;
  return obj.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

ParseResult parse_corpus(std::istream& in) {
  ParseResult out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      TweetRecord r = parse_record(line);
      if (r.lang != "en") {
        ++out.filtered_lang;
        continue;
      }
      out.records.push_back(std::move(r));
    } catch (const std::invalid_argument& e) {
      ++out.malformed;
      if (out.warnings.size() < kMaxWarnings) {
        out.warnings.push_back("line " + std::to_string(line_no) + ": " +
                               e.what());
      }
    }
  }
  return out;
}

ParseResult parse_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read corpus " + path);
  return parse_corpus(in);
}

std::uint64_t compute_engagement(const TweetRecord& record) {
  return record.favorite_count + record.retweet_count;
}

int assign_label(std::uint64_t engagement) { return engagement == 0 ? 0 : 1; }

DatasetStats dataset_stats(const std::vector<TweetRecord>& records) {
  if (records.empty()) throw std::invalid_argument("empty corpus");
  std::unordered_map<std::string, std::uint64_t> per_user;
  std::unordered_set<std::string> tags;
  std::unordered_set<std::int64_t> days;
  for (const auto& r : records) {
    ++per_user[r.author];
    tags.insert(r.hashtags.begin(), r.hashtags.end());
    // floor division keeps pre-1970 days distinct
    const std::int64_t d =
        r.timestamp >= 0 ? r.timestamp / 86400 : -((-r.timestamp + 86399) / 86400);
    days.insert(d);
  }
  std::vector<std::uint64_t> counts;
  counts.reserve(per_user.size());
  for (const auto& [user, c] : per_user) counts.push_back(c);
  std::sort(counts.begin(), counts.end());

  DatasetStats s;
  s.n_posts = records.size();
  s.n_users = per_user.size();
  s.n_days = days.size();
  s.mean_posts_per_day =
      static_cast<double>(s.n_posts) / static_cast<double>(s.n_days);
  s.n_unique_hashtags = tags.size();
  const std::size_t mid = counts.size() / 2;
  s.median_posts_per_user =
      counts.size() % 2 == 1
          ? static_cast<double>(counts[mid])
          : 0.5 * static_cast<double>(counts[mid - 1] + counts[mid]);
  s.max_posts_per_user = counts.back();
  return s;
}

std::vector<TweetRecord> filter_window(const std::vector<TweetRecord>& records,
                                       std::int64_t start, std::int64_t end) {
  if (!(start < end)) {
    throw std::invalid_argument("filter_window: start must precede end");
  }
  std::vector<TweetRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const TweetRecord& r) {
                 return r.timestamp >= start && r.timestamp < end;
               });
  return out;
}

}  // namespace engage::ingest
