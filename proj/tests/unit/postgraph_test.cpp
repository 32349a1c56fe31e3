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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>

#include "oracles.hpp"

namespace engage::graph {
namespace {

ingest::TweetRecord post(std::int64_t ts, std::set<std::string> tags) {
  ingest::TweetRecord r;
  r.id = "p" + std::to_string(ts);
  r.timestamp = ts;
  r.hashtags = std::move(tags);
  r.n_hashtags = r.hashtags.size();
  return r;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("engage_pg_" + name)).string();
}

TEST(BuildGraph, SharedTagWithinWindow) {
  const PostGraph g = build_graph({post(0, {"x"}), post(300, {"x"})}, 900);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1, 1}}));
}

TEST(BuildGraph, WeightCountsSharedTags) {
  const PostGraph g = build_graph({post(0, {"x", "y"}), post(60, {"x", "y", "z"})}, 900);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1, 2}}));
}

TEST(BuildGraph, GapEqualToDeltaGivesNoEdge) {
  EXPECT_EQ(build_graph({post(0, {"x"}), post(900, {"x"})}, 900).n_edges(), 0u);
  EXPECT_EQ(build_graph({post(0, {"x"}), post(899, {"x"})}, 900).n_edges(), 1u);
}

TEST(BuildGraph, EqualTimestampsAreConnected) {
  EXPECT_EQ(build_graph({post(5, {"x"}), post(5, {"x"})}, 1).n_edges(), 1u);
}

TEST(BuildGraph, NoSharedTagNoEdge) {
  EXPECT_EQ(build_graph({post(0, {"x"}), post(1, {"y"}), post(2, {})}, 900).n_edges(), 0u);
}

TEST(BuildGraph, MatchesBruteForceOnRandomCorpora) {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto records = oracle::random_corpus(rng, 500, 5 + rng.index(60), 600);
    for (const std::int64_t delta : {60, 900, 3600}) {
      EXPECT_EQ(build_graph(records, delta).edges(), oracle::brute_force_edges(records, delta));
    }
  }
}

TEST(BuildGraph, MonotoneInDelta) {
  Rng rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const auto records = oracle::random_corpus(rng, 300, 20, 300);
    const auto small = build_graph(records, 120).edges();
    const auto large = build_graph(records, 900).edges();
    EXPECT_TRUE(std::includes(large.begin(), large.end(), small.begin(), small.end()));
  }
}

TEST(BuildGraph, RecordOrderOnlyRelabels) {
  Rng rng(29);
  auto records = oracle::random_corpus(rng, 200, 15, 200);
  const auto base = build_graph(records, 900).edges();
  std::vector<std::uint32_t> perm(records.size());
  std::iota(perm.begin(), perm.end(), 0u);
  rng.shuffle(std::span<std::uint32_t>(perm));
  std::vector<ingest::TweetRecord> shuffled(records.size());
  for (std::size_t i = 0; i < perm.size(); ++i) shuffled[perm[i]] = records[i];
  std::vector<Edge> mapped;
  for (const auto& e : base) {
    const std::uint32_t a = perm[e.u];
    const std::uint32_t b = perm[e.v];
    mapped.push_back({std::min(a, b), std::max(a, b), e.w});
  }
  std::sort(mapped.begin(), mapped.end());
  EXPECT_EQ(build_graph(shuffled, 900).edges(), mapped);
}

TEST(PostGraph, AdjacencyIsSymmetricAndSorted) {
  Rng rng(31);
  const PostGraph g = oracle::random_graph(rng, 40, 0.2, 5);
  std::uint64_t total = 0;
  for (std::uint32_t i = 0; i < g.n_nodes(); ++i) {
    const auto nb = g.neighbors(i);
    const auto w = g.weights(i);
    total += nb.size();
    EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const auto back = g.neighbors(nb[k]);
      const auto it = std::lower_bound(back.begin(), back.end(), i);
      ASSERT_NE(it, back.end());
      EXPECT_EQ(*it, i);
      EXPECT_EQ(g.weights(nb[k])[static_cast<std::size_t>(it - back.begin())], w[k]);
    }
  }
  EXPECT_EQ(total, 2 * g.n_edges());
}

TEST(PostGraph, RejectsInvalidEdges) {
  EXPECT_THROW(PostGraph(3, {{1, 1, 1}}, 900), std::invalid_argument);
  EXPECT_THROW(PostGraph(3, {{0, 3, 1}}, 900), std::invalid_argument);
  EXPECT_THROW(PostGraph(3, {{0, 1, 0}}, 900), std::invalid_argument);
  EXPECT_THROW(PostGraph(3, {{0, 1, 1}, {1, 0, 2}}, 900), std::invalid_argument);
}

TEST(GraphStats, EdgelessGraph) {
  const GraphStats s = graph_stats(PostGraph(10, {}, 900));
  EXPECT_EQ(s.density, 0.0);
  EXPECT_EQ(s.n_connected_components, 10u);
  EXPECT_EQ(s.max_component_size, 1u);
}

TEST(GraphStats, Triangle) {
  const GraphStats s = graph_stats(PostGraph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}, 900));
  EXPECT_DOUBLE_EQ(s.density, 1.0);
  EXPECT_EQ(s.n_connected_components, 1u);
  EXPECT_EQ(s.max_component_size, 3u);
}

TEST(GraphStats, TinyGraphsHaveZeroDensity) {
  EXPECT_EQ(graph_stats(PostGraph(1, {}, 900)).density, 0.0);
  EXPECT_EQ(graph_stats(PostGraph(0, {}, 900)).density, 0.0);
}

TEST(ConnectedComponents, FirstVisitedNumbering) {
  EXPECT_EQ(connected_components(PostGraph(4, {{0, 1, 1}, {2, 3, 1}}, 900)),
            (std::vector<std::uint32_t>{0, 0, 1, 1}));
  EXPECT_EQ(connected_components(PostGraph(3, {}, 900)), (std::vector<std::uint32_t>{0, 1, 2}));
  EXPECT_EQ(connected_components(PostGraph(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}}, 900)),
            (std::vector<std::uint32_t>(5, 0)));
  EXPECT_EQ(connected_components(PostGraph(4, {{1, 3, 1}}, 900)),
            (std::vector<std::uint32_t>{0, 1, 2, 1}));
}

TEST(ConnectedComponents, AgreeWithReachability) {
  Rng rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const PostGraph g = oracle::random_graph(rng, 30, 0.05, 1);
    const auto ids = connected_components(g);
    const auto d = oracle::hop_distances(g);
    for (std::uint32_t i = 0; i < g.n_nodes(); ++i) {
      for (std::uint32_t j = 0; j < g.n_nodes(); ++j) {
        EXPECT_EQ(ids[i] == ids[j], d[i][j] >= 0);
      }
    }
  }
}

TEST(Pgr1, RoundTripAndLayout) {
  const PostGraph g(4, {{2, 0, 3}, {1, 3, 1}}, 900);
  const std::string path = temp_path("a.pgr");
  write_graph(path, g);
  EXPECT_EQ(read_graph(path), g);
  std::ifstream in(path, std::ios::binary);
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), {});
  const std::vector<unsigned char> expected = {'P', 'G', 'R', '1', 4, 0, 0, 0, 2, 0, 0, 0,
                                               0x84, 3, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0,
                                               3, 0, 0, 0, 1, 0, 0, 0, 3, 0, 0, 0,
                                               1, 0, 0, 0};
  EXPECT_EQ(bytes, expected);
  std::filesystem::remove(path);
}

TEST(Pgr1, RejectsBadMagicAndTruncation) {
  const std::string path = temp_path("bad.pgr");
  {
    std::ofstream out(path, std::ios::binary);
    out << "XXXX";
  }
  EXPECT_THROW(read_graph(path), std::runtime_error);
  write_graph(path, PostGraph(3, {{0, 1, 1}}, 60));
  std::filesystem::resize_file(path, 20);
  EXPECT_THROW(read_graph(path), std::runtime_error);
  std::filesystem::remove(path);
}

TEST(IdsSidecar, RoundTrip) {
  std::vector<ingest::TweetRecord> records = {post(1, {}), post(2, {})};
  const std::string path = temp_path("ids");
  write_ids(path, records);
  EXPECT_EQ(read_ids(path), (std::vector<std::string>{"p1", "p2"}));
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace engage::graph
