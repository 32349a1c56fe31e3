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

#ifndef ENGAGE_POSTGRAPH_HPP_
#define ENGAGE_POSTGRAPH_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "engage/ingest.hpp"

namespace engage::graph {

struct Edge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  std::uint32_t w = 0;

  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

// Undirected weighted graph over post indices, stored as CSR with both
// directions of every edge. Neighbor lists are sorted by index.
class PostGraph {
 public:
  PostGraph() = default;

  // Edges may be listed in either orientation but each pair at most once.
  // Throws std::invalid_argument on self-loops, duplicates, zero weights or
  // out-of-range endpoints.
  PostGraph(std::uint32_t n_nodes, std::vector<Edge> edges,
            std::int64_t delta_seconds);

  std::uint32_t n_nodes() const { return n_nodes_; }
  std::uint64_t n_edges() const { return neighbors_.size() / 2; }
  std::int64_t delta_seconds() const { return delta_seconds_; }

  std::span<const std::uint32_t> neighbors(std::uint32_t node) const {
    return {neighbors_.data() + offsets_[node],
            neighbors_.data() + offsets_[node + 1]};
  }
  std::span<const std::uint32_t> weights(std::uint32_t node) const {
    return {weights_.data() + offsets_[node],
            weights_.data() + offsets_[node + 1]};
  }
  std::uint32_t degree(std::uint32_t node) const {
    return static_cast<std::uint32_t>(offsets_[node + 1] - offsets_[node]);
  }

  // Each undirected edge once with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

  bool operator==(const PostGraph&) const = default;

 private:
  std::uint32_t n_nodes_ = 0;
  std::int64_t delta_seconds_ = 0;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<std::uint32_t> neighbors_;
  std::vector<std::uint32_t> weights_;
};

// Joins posts that share at least one hashtag and whose timestamps differ
// by strictly less than delta_seconds. Weight = number of shared hashtags.
// Uses an inverted index from hashtag to time-sorted posts and a sliding
// window per hashtag.
PostGraph build_graph(const std::vector<ingest::TweetRecord>& records,
                      std::int64_t delta_seconds);

struct GraphStats {
  std::uint64_t n_nodes = 0;
  std::uint64_t n_edges = 0;
  double density = 0.0;
  std::uint64_t n_connected_components = 0;
  std::uint64_t max_component_size = 0;
};

GraphStats graph_stats(const PostGraph& graph);

// Component id per node, numbered in order of the first node visited.
std::vector<std::uint32_t> connected_components(const PostGraph& graph);

// PGR1 edge-list file: "PGR1", u32 nodes, u32 edges, u32 delta seconds,
// then (u, v, w) u32 triples with u < v, all little-endian.
void write_graph(const std::string& path, const PostGraph& graph);
PostGraph read_graph(const std::string& path);

// Sidecar mapping node index to post id, one id per line.
void write_ids(const std::string& path,
               const std::vector<ingest::TweetRecord>& records);
std::vector<std::string> read_ids(const std::string& path);

}  // namespace engage::graph

#endif  // ENGAGE_POSTGRAPH_HPP_
