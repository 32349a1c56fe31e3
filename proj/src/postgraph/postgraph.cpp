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

#include "engage/postgraph.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "engage/common/binary_io.hpp"

namespace engage::graph {

PostGraph::PostGraph(std::uint32_t n_nodes, std::vector<Edge> edges,
                     std::int64_t delta_seconds)
    : n_nodes_(n_nodes), delta_seconds_(delta_seconds) {
  for (auto& e : edges) {
    if (e.u == e.v) throw std::invalid_argument("PostGraph: self-loop");
    if (e.u >= n_nodes || e.v >= n_nodes) {
      throw std::invalid_argument("PostGraph: endpoint out of range");
    }
    if (e.w == 0) throw std::invalid_argument("PostGraph: zero edge weight");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v) {
      throw std::invalid_argument("PostGraph: parallel edge");
    }
  }

  std::vector<std::uint64_t> degree(n_nodes, 0);
  for (const auto& e : edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(static_cast<std::size_t>(n_nodes) + 1, 0);
  for (std::uint32_t i = 0; i < n_nodes; ++i) {
    offsets_[i + 1] = offsets_[i] + degree[i];
  }
  neighbors_.resize(offsets_.back());
  weights_.resize(offsets_.back());
  std::vector<std::uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Sorted (u, v) order fills each list in ascending neighbor order: a node's
  // smaller neighbors arrive as `v` entries before its larger ones as `u`.
  for (const auto& e : edges) {
    neighbors_[cursor[e.v]] = e.u;
    weights_[cursor[e.v]++] = e.w;
  }
  for (const auto& e : edges) {
    neighbors_[cursor[e.u]] = e.v;
    weights_[cursor[e.u]++] = e.w;
  }
}

std::vector<Edge> PostGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(n_edges());
  for (std::uint32_t u = 0; u < n_nodes_; ++u) {
    const auto nbr = neighbors(u);
    const auto wts = weights(u);
    for (std::size_t k = 0; k < nbr.size(); ++k) {
      if (u < nbr[k]) out.push_back({u, nbr[k], wts[k]});
    }
  }
  return out;
}

PostGraph build_graph(const std::vector<ingest::TweetRecord>& records,
                      std::int64_t delta_seconds) {
  if (delta_seconds <= 0) {
    throw std::invalid_argument("build_graph: delta must be positive");
  }
  if (records.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("build_graph: too many posts");
  }
  const auto n = static_cast<std::uint32_t>(records.size());

  std::unordered_map<std::string_view, std::vector<std::uint32_t>> index;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (const auto& tag : records[i].hashtags) index[tag].push_back(i);
  }

  std::unordered_map<std::uint64_t, std::uint32_t> pair_weight;
  for (auto& [tag, posts] : index) {
    std::stable_sort(posts.begin(), posts.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return records[a].timestamp < records[b].timestamp;
                     });
    for (std::size_t a = 0; a < posts.size(); ++a) {
      const std::int64_t ta = records[posts[a]].timestamp;
      for (std::size_t b = a + 1; b < posts.size(); ++b) {
        if (records[posts[b]].timestamp - ta >= delta_seconds) break;
        const std::uint32_t lo = std::min(posts[a], posts[b]);
        const std::uint32_t hi = std::max(posts[a], posts[b]);
        ++pair_weight[(static_cast<std::uint64_t>(lo) << 32) | hi];
      }
    }
  }

  std::vector<Edge> edges;
  edges.reserve(pair_weight.size());
  for (const auto& [key, w] : pair_weight) {
    edges.push_back({static_cast<std::uint32_t>(key >> 32),
                     static_cast<std::uint32_t>(key & 0xFFFFFFFFu), w});
  }
  return PostGraph(n, std::move(edges), delta_seconds);
}

std::vector<std::uint32_t> connected_components(const PostGraph& graph) {
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  const std::uint32_t n = graph.n_nodes();
  std::vector<std::uint32_t> comp(n, kUnset);
  std::vector<std::uint32_t> stack;
  std::uint32_t next_id = 0;
  for (std::uint32_t s = 0; s < n; ++s) {
    if (comp[s] != kUnset) continue;
    comp[s] = next_id;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::uint32_t u = stack.back();
      stack.pop_back();
      for (const std::uint32_t v : graph.neighbors(u)) {
        if (comp[v] == kUnset) {
          comp[v] = next_id;
          stack.push_back(v);
        }
      }
    }
    ++next_id;
  }
  return comp;
}

GraphStats graph_stats(const PostGraph& graph) {
  GraphStats s;
  s.n_nodes = graph.n_nodes();
  s.n_edges = graph.n_edges();
  if (s.n_nodes >= 2) {
    s.density = 2.0 * static_cast<double>(s.n_edges) /
                (static_cast<double>(s.n_nodes) *
                 static_cast<double>(s.n_nodes - 1));
  }
  const auto comp = connected_components(graph);
  std::vector<std::uint64_t> sizes;
  for (const auto c : comp) {
    if (c >= sizes.size()) sizes.resize(c + 1, 0);
    ++sizes[c];
  }
  s.n_connected_components = sizes.size();
  s.max_component_size =
      sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
  return s;
}

void write_graph(const std::string& path, const PostGraph& graph) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write graph " + path);
  if (graph.n_edges() > std::numeric_limits<std::uint32_t>::max() ||
      graph.delta_seconds() < 0 ||
      graph.delta_seconds() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::runtime_error("graph does not fit the PGR1 header: " + path);
  }
  io::write_magic(out, "PGR1");
  io::write_u32(out, graph.n_nodes());
  io::write_u32(out, static_cast<std::uint32_t>(graph.n_edges()));
  io::write_u32(out, static_cast<std::uint32_t>(graph.delta_seconds()));
  for (const auto& e : graph.edges()) {
    io::write_u32(out, e.u);
    io::write_u32(out, e.v);
    io::write_u32(out, e.w);
  }
  if (!out) throw std::runtime_error("failed writing graph " + path);
}

PostGraph read_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read graph " + path);
  io::expect_magic(in, "PGR1", path);
  const std::uint32_t n = io::read_u32(in, "node count");
  const std::uint32_t m = io::read_u32(in, "edge count");
  const std::uint32_t delta = io::read_u32(in, "delta");
  std::vector<Edge> edges(m);
  for (auto& e : edges) {
    e.u = io::read_u32(in, "edge");
    e.v = io::read_u32(in, "edge");
    e.w = io::read_u32(in, "edge");
    if (e.u >= e.v) {
      throw std::runtime_error("PGR1 edge not in u < v order: " + path);
    }
  }
  return PostGraph(n, std::move(edges), delta);
}

void write_ids(const std::string& path,
               const std::vector<ingest::TweetRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ids " + path);
  for (const auto& r : records) out << r.id << '\n';
  if (!out) throw std::runtime_error("failed writing ids " + path);
}

std::vector<std::string> read_ids(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read ids " + path);
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) ids.push_back(line);
  return ids;
}

}  // namespace engage::graph
