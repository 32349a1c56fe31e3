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

#include "engage/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "engage/common/random.hpp"
#include "json.hpp"

namespace engage::eval {

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": " + std::to_string(a) +
                                " scores vs " + std::to_string(b) + " labels");
  }
}

double ratio(std::size_t num, std::size_t den, bool& degenerate) {
  if (den == 0) {
    degenerate = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) {
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace

Split make_split(std::span<const int> labels, std::array<double, 3> fractions,
                 std::uint64_t seed) {
  for (const double f : fractions) {
    if (f < 0.0) throw std::invalid_argument("make_split: negative fraction");
  }
  if (std::abs(fractions[0] + fractions[1] + fractions[2] - 1.0) > 1e-9) {
    throw std::invalid_argument("make_split: fractions must sum to 1");
  }
  Split split;
  split.seed = seed;
  split.fractions = fractions;
  Rng rng(derive_seed(seed, "split"));
  for (const int cls : {0, 1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    if (members.size() < 3) {
      throw std::invalid_argument("make_split: class " + std::to_string(cls) +
                                  " has " + std::to_string(members.size()) +
                                  " members, need at least 3");
    }
    rng.shuffle(std::span<std::size_t>(members));
    const double n = static_cast<double>(members.size());
    const auto n_train = static_cast<std::size_t>(std::lround(fractions[0] * n));
    const auto n_val = std::min(
        members.size() - n_train,
        static_cast<std::size_t>(std::lround(fractions[1] * n)));
    split.train.insert(split.train.end(), members.begin(),
                       members.begin() + n_train);
    split.val.insert(split.val.end(), members.begin() + n_train,
                     members.begin() + n_train + n_val);
    split.test.insert(split.test.end(), members.begin() + n_train + n_val,
                      members.end());
  }
  for (const int v : labels) {
    if (v != 0 && v != 1) throw std::invalid_argument("make_split: labels must be 0/1");
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.val.begin(), split.val.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

void write_split_json(const std::string& path, const Split& split) {
  nlohmann::ordered_json j;
  j["seed"] = split.seed;
  j["fractions"] = split.fractions;
  j["train"] = split.train;
  j["val"] = split.val;
  j["test"] = split.test;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write split " + path);
  out << j.dump() << '\n';
  if (!out) throw std::runtime_error("failed writing split " + path);
}

Split read_split_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read split " + path);
  try {
    const auto j = nlohmann::json::parse(in);
    Split split;
    split.seed = j.at("seed").get<std::uint64_t>();
    split.fractions = j.at("fractions").get<std::array<double, 3>>();
    split.train = j.at("train").get<std::vector<std::size_t>>();
    split.val = j.at("val").get<std::vector<std::size_t>>();
    split.test = j.at("test").get<std::vector<std::size_t>>();
    return split;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed split file " + path + ": " + e.what());
  }
}

ThresholdMetrics classification_metrics(std::span<const double> probs,
                                        std::span<const int> labels,
                                        double threshold, Averaging averaging) {
  check_lengths(probs.size(), labels.size(), "classification_metrics");
  ThresholdMetrics m;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const bool pred = probs[i] >= threshold;
    const bool truth = labels[i] == 1;
    if (pred && truth) ++m.tp;
    if (pred && !truth) ++m.fp;
    if (!pred && truth) ++m.fn;
    if (!pred && !truth) ++m.tn;
  }
  bool degenerate = false;
  m.accuracy = ratio(m.tp + m.tn, probs.size(), degenerate);
  const double p1 = ratio(m.tp, m.tp + m.fp, degenerate);
  const double r1 = ratio(m.tp, m.tp + m.fn, degenerate);
  if (averaging == Averaging::kPositiveClass) {
    m.precision = p1;
    m.recall = r1;
  } else {
    const double p0 = ratio(m.tn, m.tn + m.fn, degenerate);
    const double r0 = ratio(m.tn, m.tn + m.fp, degenerate);
    m.precision = 0.5 * (p0 + p1);
    m.recall = 0.5 * (r0 + r1);
  }
  m.f1 = harmonic(m.precision, m.recall);
  m.degenerate = degenerate;
  return m;
}

double auc_roc(std::span<const double> scores, std::span<const int> labels) {
  check_lengths(scores.size(), labels.size(), "auc_roc");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    // Tied block occupies ranks i+1 .. j; each gets the midrank.
    const double mid = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        rank_sum += mid;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw std::invalid_argument("auc_roc: both classes must be present");
  }
  const double np = static_cast<double>(n_pos);
  const double u = rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

double auc_pr(std::span<const double> scores, std::span<const int> labels) {
  check_lengths(scores.size(), labels.size(), "auc_pr");
  const auto n_pos = static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), 1));
  if (n_pos == 0) throw std::invalid_argument("auc_pr: no positive labels");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double ap = 0.0;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::size_t gained = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (labels[order[j]] == 1) ++gained;
      ++j;
    }
    tp += gained;
    if (gained > 0) {
      ap += (static_cast<double>(gained) / static_cast<double>(n_pos)) *
            (static_cast<double>(tp) / static_cast<double>(j));
    }
    i = j;
  }
  return ap;
}

EvalReport evaluate(std::span<const double> probs, std::span<const int> labels,
                    std::span<const std::size_t> rows, Averaging averaging) {
  check_lengths(probs.size(), labels.size(), "evaluate");
  std::vector<double> p;
  std::vector<int> y;
  p.reserve(rows.size());
  y.reserve(rows.size());
  for (const std::size_t r : rows) {
    if (r >= probs.size()) throw std::out_of_range("evaluate: row index");
    p.push_back(probs[r]);
    y.push_back(labels[r]);
  }
  const auto m = classification_metrics(p, y, 0.5, averaging);
  EvalReport out;
  out.accuracy = m.accuracy;
  out.precision = m.precision;
  out.recall = m.recall;
  out.f1 = m.f1;
  out.auc_roc = auc_roc(p, y);
  out.auc_pr = auc_pr(p, y);
  return out;
}

void write_report_csv(const std::string& path,
                      const std::vector<ReportRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report " + path);
  out << "name,Acc,Prec,Recall,AUC_ROC,AUC_PR,F1\n";
  char buf[256];
  for (const auto& row : rows) {
    const auto& r = row.report;
    std::snprintf(buf, sizeof(buf), ",%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  r.accuracy, r.precision, r.recall, r.auc_roc, r.auc_pr, r.f1);
    out << row.name << buf;
  }
  if (!out) throw std::runtime_error("failed writing report " + path);
}

std::vector<ReportRow> read_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read report " + path);
  std::string line;
  std::getline(in, line);
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    ReportRow row;
    std::string field;
    std::getline(ss, row.name, ',');
    double v[6];
    for (double& x : v) {
      if (!std::getline(ss, field, ',')) {
        throw std::runtime_error("short report row in " + path);
      }
      x = std::stod(field);
    }
    row.report = {v[0], v[1], v[2], v[3], v[4], v[5]};
    rows.push_back(row);
  }
  return rows;
}

std::vector<AblationRow> run_ablation(const features::Tensor2& phi,
                                      const features::Tensor2& emb,
                                      const graph::PostGraph& graph,
                                      std::span<const int> labels,
                                      const Split& split,
                                      const AblationConfig& config) {
  std::vector<AblationRow> out;
  for (const auto set : config.grid) {
    const std::string name(features::feature_set_name(set));
    const features::Tensor2 x = features::make_feature_set(
        phi, emb, set, split.train, config.features);
    const std::uint64_t seed = derive_seed(config.seed, "ablation/" + name);
    model::SageModel net(x, graph, config.sage, seed);
    model::TrainConfig train_config = config.train;
    train_config.seed = seed;
    AblationRow row;
    row.set = set;
    row.training = model::train(net, labels, split.train, split.val,
                                train_config);
    const auto probs = model::predict_proba(net);
    row.val = evaluate(probs, labels, split.val);
    row.test = evaluate(probs, labels, split.test);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace engage::eval
