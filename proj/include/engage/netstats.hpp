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

#ifndef ENGAGE_NETSTATS_HPP_
#define ENGAGE_NETSTATS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "engage/postgraph.hpp"

namespace engage::netstats {

// Sum of incident edge weights.
std::vector<double> weighted_degree(const graph::PostGraph& graph);

// Component-scaled closeness over unweighted BFS distances:
// (r / S) * (r / (n - 1)) with r reachable nodes at total distance S.
std::vector<double> closeness(const graph::PostGraph& graph);

// Closeness of the listed nodes only, in the order given. Throws
// std::out_of_range on an invalid node.
std::vector<double> closeness(const graph::PostGraph& graph,
                              std::span<const std::uint32_t> nodes);

// Brandes betweenness over unweighted shortest paths, normalized by
// (n - 1)(n - 2) / 2. All zeros when n < 3.
std::vector<double> betweenness(const graph::PostGraph& graph);

// Brandes accumulation from `n_sources` uniformly drawn sources, rescaled by
// n / n_sources. Equals betweenness() when n_sources >= n.
std::vector<double> betweenness_sampled(const graph::PostGraph& graph,
                                        std::uint32_t n_sources,
                                        std::uint64_t seed);

struct EigenvectorResult {
  std::vector<double> values;  // absolute values, unit L2 norm
  std::uint32_t iterations = 0;
  bool converged = false;
};

// Power iteration on the weighted adjacency shifted by the identity. The
// shift leaves eigenvectors unchanged and keeps bipartite graphs from
// oscillating between two iterates.
EigenvectorResult eigenvector(const graph::PostGraph& graph,
                              double tolerance = 1e-8,
                              std::uint32_t max_iterations = 1000);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Asymptotic Kolmogorov survival function Q(lambda) =
// 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2), clamped to [0, 1].
double kolmogorov_q(double lambda);

// Two-sample test. Throws std::invalid_argument on an empty sample.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct ClassSplitSummary {
  std::uint64_t n0 = 0;
  std::uint64_t n1 = 0;
  double mean0 = 0.0;
  double std0 = 0.0;  // population std
  double mean1 = 0.0;
  double std1 = 0.0;
  KsResult ks;
};

// Throws std::invalid_argument unless both classes are present.
ClassSplitSummary class_split_summary(std::span<const double> values,
                                      std::span<const int> labels);

// Pearson correlations between equal-length columns. A zero-variance column
// correlates 0 with every other column and 1 with itself.
std::vector<std::vector<double>> correlation_matrix(
    const std::vector<std::vector<double>>& columns);

// Distinct values with their multiplicities, ascending by value.
std::vector<std::pair<double, std::uint64_t>> value_counts(
    std::span<const double> values);

}  // namespace engage::netstats

#endif  // ENGAGE_NETSTATS_HPP_
