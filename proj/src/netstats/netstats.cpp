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

#include "engage/netstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "engage/common/random.hpp"

namespace engage::netstats {

namespace {

constexpr std::int64_t kUnreached = -1;

// Single-source Brandes pass; adds pair dependencies of `source` into `acc`.
void brandes_accumulate(const graph::PostGraph& graph, std::uint32_t source,
                        std::vector<double>& acc,
                        std::vector<std::int64_t>& dist,
                        std::vector<double>& sigma, std::vector<double>& delta,
                        std::vector<std::uint32_t>& order) {
  std::fill(dist.begin(), dist.end(), kUnreached);
  std::fill(sigma.begin(), sigma.end(), 0.0);
  std::fill(delta.begin(), delta.end(), 0.0);
  order.clear();

  dist[source] = 0;
  sigma[source] = 1.0;
  order.push_back(source);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::uint32_t u = order[head];
    for (const std::uint32_t v : graph.neighbors(u)) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        order.push_back(v);
      }
      if (dist[v] == dist[u] + 1) sigma[v] += sigma[u];
    }
  }
  for (std::size_t k = order.size(); k-- > 1;) {
    const std::uint32_t w = order[k];
    for (const std::uint32_t v : graph.neighbors(w)) {
      if (dist[v] == dist[w] - 1) {
        delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
    }
    acc[w] += delta[w];
  }
}

std::vector<double> brandes(const graph::PostGraph& graph,
                            std::span<const std::uint32_t> sources,
                            double scale) {
  const std::uint32_t n = graph.n_nodes();
  std::vector<double> acc(n, 0.0);
  if (n < 3) return acc;
  std::vector<std::int64_t> dist(n);
  std::vector<double> sigma(n);
  std::vector<double> delta(n);
  std::vector<std::uint32_t> order;
  order.reserve(n);
  for (const std::uint32_t s : sources) {
    brandes_accumulate(graph, s, acc, dist, sigma, delta, order);
  }
  // Every unordered pair is counted from both endpoints.
  const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2);
  for (auto& v : acc) v = v * scale / norm;
  return acc;
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double population_std(std::span<const double> v, double mean) {
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace

std::vector<double> weighted_degree(const graph::PostGraph& graph) {
  std::vector<double> out(graph.n_nodes(), 0.0);
  for (std::uint32_t u = 0; u < graph.n_nodes(); ++u) {
    for (const std::uint32_t w : graph.weights(u)) out[u] += w;
  }
  return out;
}

std::vector<double> closeness(const graph::PostGraph& graph,
                              std::span<const std::uint32_t> nodes) {
  const std::uint32_t n = graph.n_nodes();
  std::vector<double> out(nodes.size(), 0.0);
  if (n < 2) return out;
  std::vector<std::int64_t> dist(n, kUnreached);
  std::vector<std::uint32_t> order;
  order.reserve(n);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::uint32_t s = nodes[i];
    if (s >= n) throw std::out_of_range("closeness: node out of range");
    order.clear();
    dist[s] = 0;
    order.push_back(s);
    std::uint64_t total = 0;
    for (std::size_t head = 0; head < order.size(); ++head) {
      const std::uint32_t u = order[head];
      for (const std::uint32_t v : graph.neighbors(u)) {
        if (dist[v] == kUnreached) {
          dist[v] = dist[u] + 1;
          total += static_cast<std::uint64_t>(dist[v]);
          order.push_back(v);
        }
      }
    }
    const double r = static_cast<double>(order.size() - 1);
    if (total > 0) {
      out[i] = (r / static_cast<double>(total)) * (r / (n - 1.0));
    }
    for (const std::uint32_t v : order) dist[v] = kUnreached;
  }
  return out;
}

std::vector<double> closeness(const graph::PostGraph& graph) {
  std::vector<std::uint32_t> all(graph.n_nodes());
  std::iota(all.begin(), all.end(), 0u);
  return closeness(graph, all);
}

std::vector<double> betweenness(const graph::PostGraph& graph) {
  std::vector<std::uint32_t> sources(graph.n_nodes());
  std::iota(sources.begin(), sources.end(), 0u);
  return brandes(graph, sources, 1.0);
}

std::vector<double> betweenness_sampled(const graph::PostGraph& graph,
                                        std::uint32_t n_sources,
                                        std::uint64_t seed) {
  const std::uint32_t n = graph.n_nodes();
  if (n_sources >= n) return betweenness(graph);
  if (n_sources == 0) {
    throw std::invalid_argument("betweenness_sampled: need at least 1 source");
  }
  std::vector<std::uint32_t> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 0u);
  Rng rng(seed);
  rng.shuffle(std::span<std::uint32_t>(nodes));
  nodes.resize(n_sources);
  std::sort(nodes.begin(), nodes.end());
  return brandes(graph, nodes, static_cast<double>(n) / n_sources);
}

EigenvectorResult eigenvector(const graph::PostGraph& graph, double tolerance,
                              std::uint32_t max_iterations) {
  const std::uint32_t n = graph.n_nodes();
  EigenvectorResult result;
  if (n == 0) {
    result.converged = true;
    return result;
  }
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(n);
  while (result.iterations < max_iterations) {
    ++result.iterations;
    for (std::uint32_t u = 0; u < n; ++u) {
      double acc = x[u];
      const auto nbr = graph.neighbors(u);
      const auto wts = graph.weights(u);
      for (std::size_t k = 0; k < nbr.size(); ++k) acc += wts[k] * x[nbr[k]];
      y[u] = acc;
    }
    double norm = 0.0;
    for (const double v : y) norm += v * v;
    norm = std::sqrt(norm);
    double change = 0.0;
    for (std::uint32_t u = 0; u < n; ++u) {
      y[u] /= norm;
      change = std::max(change, std::abs(y[u] - x[u]));
    }
    x.swap(y);
    if (change < tolerance) {
      result.converged = true;
      break;
    }
  }
  for (auto& v : x) v = std::abs(v);
  result.values = std::move(x);
  return result;
}

double kolmogorov_q(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  double q = 0.0;
  if (lambda < 1.18) {
    // Jacobi theta transform of the same series; converges in a few terms
    // where the alternating form would need thousands.
    const double a = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int k = 1; k <= 64; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * a);
      sum += term;
      if (term < 1e-300 || term < sum * 1e-18) break;
    }
    q = 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
  } else {
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      q += sign * term;
      sign = -sign;
      if (term < 1e-300 || term < std::abs(q) * 1e-18) break;
    }
    q *= 2.0;
  }
  return std::clamp(q, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("ks_two_sample: empty sample");
  }
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());

  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    // Advance past every copy of the smallest pending value in both samples
    // so ties are evaluated with right-continuous CDFs.
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }

  KsResult r;
  r.statistic = d;
  const double ne = na * nb / (na + nb);
  const double root = std::sqrt(ne);
  r.p_value = kolmogorov_q((root + 0.12 + 0.11 / root) * d);
  return r;
}

ClassSplitSummary class_split_summary(std::span<const double> values,
                                      std::span<const int> labels) {
  if (values.size() != labels.size()) {
    throw std::invalid_argument("class_split_summary: length mismatch");
  }
  std::vector<double> c0;
  std::vector<double> c1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    (labels[i] == 0 ? c0 : c1).push_back(values[i]);
  }
  if (c0.empty() || c1.empty()) {
    throw std::invalid_argument(
        "class_split_summary: both classes must be present");
  }
  ClassSplitSummary s;
  s.n0 = c0.size();
  s.n1 = c1.size();
  s.mean0 = mean_of(c0);
  s.mean1 = mean_of(c1);
  s.std0 = population_std(c0, s.mean0);
  s.std1 = population_std(c1, s.mean1);
  s.ks = ks_two_sample(c0, c1);
  return s;
}

std::vector<std::vector<double>> correlation_matrix(
    const std::vector<std::vector<double>>& columns) {
  const std::size_t k = columns.size();
  if (k < 2) {
    throw std::invalid_argument("correlation_matrix: need at least 2 columns");
  }
  const std::size_t n = columns[0].size();
  if (n < 2) {
    throw std::invalid_argument("correlation_matrix: need at least 2 rows");
  }
  for (const auto& c : columns) {
    if (c.size() != n) {
      throw std::invalid_argument("correlation_matrix: length mismatch");
    }
  }
  std::vector<std::vector<double>> centered(k, std::vector<double>(n));
  std::vector<double> norms(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    const double m = mean_of(columns[c]);
    for (std::size_t i = 0; i < n; ++i) {
      centered[c][i] = columns[c][i] - m;
      norms[c] += centered[c][i] * centered[c][i];
    }
    norms[c] = std::sqrt(norms[c]);
  }
  std::vector<std::vector<double>> out(k, std::vector<double>(k, 0.0));
  for (std::size_t a = 0; a < k; ++a) {
    out[a][a] = 1.0;
    for (std::size_t b = a + 1; b < k; ++b) {
      double r = 0.0;
      if (norms[a] > 0.0 && norms[b] > 0.0) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          dot += centered[a][i] * centered[b][i];
        }
        r = std::clamp(dot / (norms[a] * norms[b]), -1.0, 1.0);
      }
      out[a][b] = r;
      out[b][a] = r;
    }
  }
  return out;
}

std::vector<std::pair<double, std::uint64_t>> value_counts(
    std::span<const double> values) {
  std::map<double, std::uint64_t> counts;
  for (const double v : values) ++counts[v];
  return {counts.begin(), counts.end()};
}

}  // namespace engage::netstats
