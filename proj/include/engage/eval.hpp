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

#ifndef ENGAGE_EVAL_HPP_
#define ENGAGE_EVAL_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "engage/features.hpp"
#include "engage/model/classifier.hpp"
#include "engage/model/sage.hpp"
#include "engage/postgraph.hpp"

namespace engage::eval {

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
  std::array<double, 3> fractions{0.70, 0.15, 0.15};

  bool operator==(const Split&) const = default;
};

// Stratified shuffle split. Each class is shuffled with the seed and cut at
// round(f_train * n_c) and round(f_val * n_c); parts are returned sorted.
// Throws std::invalid_argument when fractions do not sum to 1 or a class has
// fewer than 3 members.
Split make_split(std::span<const int> labels,
                 std::array<double, 3> fractions = {0.70, 0.15, 0.15},
                 std::uint64_t seed = 0);

void write_split_json(const std::string& path, const Split& split);
Split read_split_json(const std::string& path);

enum class Averaging { kMacro, kPositiveClass };

struct ThresholdMetrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;   // harmonic mean of `precision` and `recall`
  bool degenerate = false;  // some per-class ratio had a zero denominator
};

// Predicts 1 when prob >= threshold. Zero-denominator ratios count as 0 and
// set `degenerate`.
ThresholdMetrics classification_metrics(std::span<const double> probs,
                                        std::span<const int> labels,
                                        double threshold = 0.5,
                                        Averaging averaging = Averaging::kMacro);

// Mann-Whitney statistic with ties counted as one half. Throws
// std::invalid_argument unless both classes are present.
double auc_roc(std::span<const double> scores, std::span<const int> labels);

// Average precision: sum over descending distinct scores of
// (recall gain) * (precision at that cut). Throws std::invalid_argument when
// there are no positives.
double auc_pr(std::span<const double> scores, std::span<const int> labels);

struct EvalReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double auc_roc = 0.0;
  double auc_pr = 0.0;
  double f1 = 0.0;
};

// All six metrics over `rows` of the per-node probabilities.
EvalReport evaluate(std::span<const double> probs, std::span<const int> labels,
                    std::span<const std::size_t> rows,
                    Averaging averaging = Averaging::kMacro);

struct ReportRow {
  std::string name;
  EvalReport report;
};

// Columns: name, Acc, Prec, Recall, AUC_ROC, AUC_PR, F1.
void write_report_csv(const std::string& path,
                      const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_report_csv(const std::string& path);

struct AblationConfig {
  std::vector<features::FeatureSet> grid = features::all_feature_sets();
  features::FeatureOptions features;
  model::SageConfig sage;
  model::TrainConfig train;
  std::uint64_t seed = 0;
};

struct AblationRow {
  features::FeatureSet set = features::FeatureSet::kFull;
  EvalReport val;
  EvalReport test;
  model::TrainResult training;
};

// Trains and evaluates one graph model per feature set on the shared split.
// Model seeds come from `config.seed` and the row name.
std::vector<AblationRow> run_ablation(const features::Tensor2& phi,
                                      const features::Tensor2& emb,
                                      const graph::PostGraph& graph,
                                      std::span<const int> labels,
                                      const Split& split,
                                      const AblationConfig& config);

}  // namespace engage::eval

#endif  // ENGAGE_EVAL_HPP_
