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

#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

namespace engage::oracle {

std::vector<ingest::TweetRecord> random_corpus(Rng& rng, std::size_t n,
                                               std::size_t pool,
                                               std::int64_t span_minutes) {
  std::vector<ingest::TweetRecord> records(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = records[i];
    r.id = "p" + std::to_string(i);
    r.timestamp = 1'600'000'000 + 60 * static_cast<std::int64_t>(
                                           rng.index(static_cast<std::uint64_t>(span_minutes)));
    const std::size_t k = 1 + rng.index(4);
    for (std::size_t t = 0; t < k; ++t) r.hashtags.insert("t" + std::to_string(rng.index(pool)));
    r.n_hashtags = r.hashtags.size();
  }
  return records;
}

std::vector<graph::Edge> brute_force_edges(
    const std::vector<ingest::TweetRecord>& records, std::int64_t delta) {
  std::vector<graph::Edge> edges;
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t j = i + 1; j < records.size(); ++j) {
      const std::int64_t dt = records[i].timestamp - records[j].timestamp;
      if ((dt < 0 ? -dt : dt) >= delta) continue;
      std::uint32_t shared = 0;
      for (const auto& tag : records[i].hashtags) shared += records[j].hashtags.count(tag);
      if (shared > 0) {
        edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), shared});
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

graph::PostGraph random_graph(Rng& rng, std::uint32_t n, double p,
                              std::uint32_t max_weight) {
  std::vector<graph::Edge> edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) {
        edges.push_back({i, j, 1 + static_cast<std::uint32_t>(rng.index(max_weight))});
      }
    }
  }
  return graph::PostGraph(n, std::move(edges), 900);
}

std::vector<std::vector<int>> hop_distances(const graph::PostGraph& g) {
  const std::uint32_t n = g.n_nodes();
  const int inf = 1 << 28;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::uint32_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (std::uint32_t k = 0; k < n; ++k) {
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = 0; j < n; ++j) {
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
  }
  for (auto& row : d) {
    for (int& v : row) {
      if (v >= inf) v = -1;
    }
  }
  return d;
}

std::vector<double> closeness(const graph::PostGraph& g) {
  const std::uint32_t n = g.n_nodes();
  const auto d = hop_distances(g);
  std::vector<double> out(n, 0.0);
  for (std::uint32_t v = 0; v < n; ++v) {
    double reach = 0.0;
    double sum = 0.0;
    for (std::uint32_t u = 0; u < n; ++u) {
      if (u != v && d[v][u] > 0) {
        reach += 1.0;
        sum += d[v][u];
      }
    }
    if (sum > 0.0) out[v] = (reach / sum) * (reach / (n - 1.0));
  }
  return out;
}

std::vector<double> betweenness(const graph::PostGraph& g) {
  const std::uint32_t n = g.n_nodes();
  std::vector<double> out(n, 0.0);
  if (n < 3) return out;
  const auto d = hop_distances(g);
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& e : g.edges()) adj[e.u][e.v] = adj[e.v][e.u] = true;
  // sigma[s][t]: number of shortest s-t paths, by increasing distance.
  std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
  for (std::uint32_t s = 0; s < n; ++s) {
    std::vector<std::uint32_t> by_dist;
    for (std::uint32_t t = 0; t < n; ++t) {
      if (d[s][t] >= 0) by_dist.push_back(t);
    }
    std::sort(by_dist.begin(), by_dist.end(),
              [&](std::uint32_t a, std::uint32_t b) { return d[s][a] < d[s][b]; });
    for (const std::uint32_t t : by_dist) {
      if (t == s) {
        sigma[s][t] = 1.0;
        continue;
      }
      for (std::uint32_t u = 0; u < n; ++u) {
        if (adj[u][t] && d[s][u] == d[s][t] - 1) sigma[s][t] += sigma[s][u];
      }
    }
  }
  for (std::uint32_t s = 0; s < n; ++s) {
    for (std::uint32_t t = s + 1; t < n; ++t) {
      if (d[s][t] <= 0) continue;
      for (std::uint32_t v = 0; v < n; ++v) {
        if (v == s || v == t || d[s][v] < 0 || d[v][t] < 0) continue;
        if (d[s][v] + d[v][t] == d[s][t]) out[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
      }
    }
  }
  const double norm = (n - 1.0) * (n - 2.0) / 2.0;
  for (double& v : out) v /= norm;
  return out;
}

std::vector<double> betweenness_by_enumeration(const graph::PostGraph& g) {
  const std::uint32_t n = g.n_nodes();
  std::vector<double> out(n, 0.0);
  if (n < 3) return out;
  const auto d = hop_distances(g);
  for (std::uint32_t s = 0; s < n; ++s) {
    for (std::uint32_t t = s + 1; t < n; ++t) {
      if (d[s][t] <= 0) continue;
      std::vector<std::vector<std::uint32_t>> paths;
      std::vector<std::uint32_t> path = {s};
      std::function<void(std::uint32_t)> walk = [&](std::uint32_t u) {
        if (u == t) {
          paths.push_back(path);
          return;
        }
        if (static_cast<int>(path.size()) > d[s][t]) return;
        for (const std::uint32_t v : g.neighbors(u)) {
          if (std::find(path.begin(), path.end(), v) != path.end()) continue;
          path.push_back(v);
          walk(v);
          path.pop_back();
        }
      };
      walk(s);
      std::vector<double> through(n, 0.0);
      std::size_t shortest = 0;
      for (const auto& p : paths) {
        if (static_cast<int>(p.size()) - 1 != d[s][t]) continue;
        ++shortest;
        for (std::size_t k = 1; k + 1 < p.size(); ++k) through[p[k]] += 1.0;
      }
      for (std::uint32_t v = 0; v < n; ++v) out[v] += through[v] / static_cast<double>(shortest);
    }
  }
  const double norm = (n - 1.0) * (n - 2.0) / 2.0;
  for (double& v : out) v /= norm;
  return out;
}

DenseEigen eigenvector(const graph::PostGraph& g) {
  const std::uint32_t n = g.n_nodes();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) a(e.u, e.v) = a(e.v, e.u) = e.w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  DenseEigen out;
  const Eigen::VectorXd top = solver.eigenvectors().col(n - 1);
  out.vector.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) out.vector[i] = std::abs(top(i));
  double second = 0.0;
  for (std::uint32_t i = 0; i + 1 < n; ++i) second = std::max(second, std::abs(values(i) + 1.0));
  out.gap = (values(n - 1) + 1.0) - second;
  return out;
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  double best = 0.0;
  auto cdf = [](std::span<const double> s, double x) {
    std::size_t c = 0;
    for (double v : s) c += v <= x ? 1 : 0;
    return static_cast<double>(c) / static_cast<double>(s.size());
  };
  for (auto sample : {a, b}) {
    for (double x : sample) best = std::max(best, std::abs(cdf(a, x) - cdf(b, x)));
  }
  return best;
}

double kolmogorov_q(double lambda) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  if (lambda <= 0.0) return 1.0;
  const Big l(lambda);
  Big sum = 0;
  const Big eps("1e-45");
  for (long k = 1;; ++k) {
    const Big term = exp(-2 * Big(k) * Big(k) * l * l);
    sum += (k % 2 == 1) ? term : Big(-term);
    if (term < eps) break;
  }
  const double q = static_cast<double>(2 * sum);
  return std::clamp(q, 0.0, 1.0);
}

Metrics threshold_metrics(std::span<const double> probs,
                          std::span<const int> labels, double threshold) {
  double tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const bool pred = probs[i] >= threshold;
    if (pred && labels[i] == 1) tp += 1;
    if (pred && labels[i] == 0) fp += 1;
    if (!pred && labels[i] == 0) tn += 1;
    if (!pred && labels[i] == 1) fn += 1;
  }
  auto safe = [](double num, double den) { return den > 0 ? num / den : 0.0; };
  Metrics m;
  m.accuracy = (tp + tn) / static_cast<double>(probs.size());
  m.precision = 0.5 * (safe(tp, tp + fp) + safe(tn, tn + fn));
  m.recall = 0.5 * (safe(tp, tp + fn) + safe(tn, tn + fp));
  m.f1 = safe(2 * m.precision * m.recall, m.precision + m.recall);
  return m;
}

double auc_roc(std::span<const double> scores, std::span<const int> labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

double auc_pr(std::span<const double> scores, std::span<const int> labels) {
  std::set<double, std::greater<>> cuts(scores.begin(), scores.end());
  double positives = 0.0;
  for (int y : labels) positives += y;
  double ap = 0.0;
  double prev_recall = 0.0;
  for (double cut : cuts) {
    double tp = 0.0;
    double predicted = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] >= cut) {
        predicted += 1.0;
        tp += labels[i];
      }
    }
    const double recall = tp / positives;
    ap += (recall - prev_recall) * (tp / predicted);
    prev_recall = recall;
  }
  return ap;
}

Eigensystem jacobi(const nn::Tensor2& symmetric) {
  const std::size_t n = symmetric.rows();
  std::vector<std::vector<long double>> a(n, std::vector<long double>(n));
  std::vector<std::vector<long double>> v(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) {
    v[i][i] = 1.0L;
    for (std::size_t j = 0; j < n; ++j) a[i][j] = symmetric(i, j);
  }
  for (int sweep = 0; sweep < 100; ++sweep) {
    long double off = 0.0L;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (off < 1e-36L) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0L) continue;
        const long double theta = (a[q][q] - a[p][p]) / (2.0L * a[p][q]);
        const long double t = (theta >= 0 ? 1.0L : -1.0L) /
                              (std::fabs(theta) + std::sqrt(theta * theta + 1.0L));
        const long double c = 1.0L / std::sqrt(t * t + 1.0L);
        const long double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const long double akp = a[k][p];
          const long double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const long double apk = a[p][k];
          const long double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const long double vkp = v[k][p];
          const long double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  Eigensystem out;
  for (const std::size_t j : order) {
    out.values.push_back(static_cast<double>(a[j][j]));
    std::vector<double> col(n);
    for (std::size_t k = 0; k < n; ++k) col[k] = static_cast<double>(v[k][j]);
    out.vectors.push_back(std::move(col));
  }
  return out;
}

nn::Tensor2 covariance(const nn::Tensor2& x, std::span<const std::size_t> rows) {
  const std::size_t d = x.cols();
  std::vector<long double> mean(d, 0.0L);
  for (const std::size_t r : rows) {
    for (std::size_t c = 0; c < d; ++c) mean[c] += x(r, c);
  }
  for (auto& m : mean) m /= static_cast<long double>(rows.size());
  nn::Tensor2 cov(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      long double s = 0.0L;
      for (const std::size_t r : rows) s += (x(r, i) - mean[i]) * (x(r, j) - mean[j]);
      cov(i, j) = cov(j, i) = static_cast<double>(s / (rows.size() - 1.0L));
    }
  }
  return cov;
}

namespace {

double gelu_ref(double x) {
  const double c = std::sqrt(2.0 / 3.14159265358979323846);
  return 0.5 * x * (1.0 + std::tanh(c * (x + 0.044715 * x * x * x)));
}

// act(x W + b) for one row.
std::vector<double> dense_row(const nn::DenseLayer& layer, const std::vector<double>& in,
                              bool activate) {
  const nn::Tensor2& w = layer.weight.value;
  std::vector<double> out(w.cols());
  for (std::size_t c = 0; c < w.cols(); ++c) {
    double s = layer.bias.value(0, c);
    for (std::size_t r = 0; r < w.rows(); ++r) s += in[r] * w(r, c);
    out[c] = activate ? gelu_ref(s) : s;
  }
  return out;
}

}  // namespace

std::vector<double> sage_logits(model::SageModel& model, const nn::Tensor2& x,
                                const graph::PostGraph& g) {
  const std::uint32_t n = g.n_nodes();
  std::vector<std::vector<double>> h(n);
  for (std::uint32_t i = 0; i < n; ++i) h[i].assign(x.row(i).begin(), x.row(i).end());
  const bool weighted = model.config().weighted_agg;
  for (const auto& layer : model.sage_layers()) {
    std::vector<std::vector<double>> next(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      std::vector<double> agg(h[i].size(), 0.0);
      const auto nbrs = g.neighbors(i);
      const auto ws = g.weights(i);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        const double scale = weighted ? ws[k] : 1.0;
        for (std::size_t c = 0; c < agg.size(); ++c) agg[c] += scale * h[nbrs[k]][c];
      }
      std::vector<double> cat = h[i];
      cat.insert(cat.end(), agg.begin(), agg.end());
      next[i] = dense_row(layer, cat, true);
    }
    h = std::move(next);
  }
  std::vector<double> logits(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    logits[i] = dense_row(model.output(), dense_row(model.head(), h[i], true), false)[0];
  }
  return logits;
}

}  // namespace engage::oracle
