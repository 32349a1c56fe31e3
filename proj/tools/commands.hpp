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

#ifndef ENGAGE_TOOLS_COMMANDS_HPP_
#define ENGAGE_TOOLS_COMMANDS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "engage/baselines.hpp"
#include "engage/eval.hpp"
#include "engage/features.hpp"
#include "engage/ingest.hpp"
#include "engage/model/classifier.hpp"
#include "engage/model/sage.hpp"
#include "engage/synth.hpp"

namespace engage::cli {

// Raised when a referenced input file is missing. The message starts with
// "input not found".
class InputNotFound : public std::runtime_error {
 public:
  explicit InputNotFound(const std::string& path)
      : std::runtime_error("input not found: " + path) {}
};

void require_input(const std::string& path);

// labels.csv: node,id,engagement,label in corpus order.
struct LabelTable {
  std::vector<std::string> ids;
  std::vector<std::uint64_t> engagement;
  std::vector<int> labels;
};
void write_labels_csv(const std::string& path,
                      const std::vector<ingest::TweetRecord>& records);
LabelTable read_labels_csv(const std::string& path);

struct IngestOptions {
  std::string input;
  std::string out;
  std::string stats;  // optional dataset_stats JSON
  std::optional<std::string> start;  // inclusive window start
  std::optional<std::string> end;    // exclusive window end
};
void run_ingest(const IngestOptions& options);

struct BuildGraphOptions {
  std::string input;
  std::string out;
  double delta_minutes = 15.0;
  std::string stats;  // optional graph_stats JSON
};
void run_build_graph(const BuildGraphOptions& options);

struct AnalyzeOptions {
  std::string graph;
  std::string labels;
  std::string out_dir;
  std::string input;  // optional corpus for per-user and per-hashtag counts
  std::uint32_t betweenness_samples = 0;  // 0 means exact
  std::uint64_t seed = 0;
};
void run_analyze(const AnalyzeOptions& options);

struct EmbedOptions {
  std::string input;
  std::string out;
  std::size_t dim = 768;
  std::uint64_t seed = 7;
};
void run_embed_fallback(const EmbedOptions& options);

struct FeaturesOptions {
  std::string input;
  std::string out;
  std::string labels;  // optional labels.csv output
};
void run_features(const FeaturesOptions& options);

// Inputs shared by train, baseline and ablate.
struct ModelInputs {
  std::string graph;
  std::string phi;
  std::string emb;
  std::string labels;
  std::string split;  // read when present, otherwise written
  std::array<double, 3> fractions{0.70, 0.15, 0.15};
  std::string feature_set;  // overrides the flags below when set
  bool use_phi = false;
  bool use_emb = false;
  bool pca = false;
  features::FeatureOptions features;
};
features::FeatureSet resolve_feature_set(const ModelInputs& inputs);

struct TrainOptions {
  ModelInputs inputs;
  model::SageConfig sage;
  model::TrainConfig train;
  std::uint64_t seed = 0;
  std::string out;
  std::string history;
};
void run_train(const TrainOptions& options);

struct BaselineOptions {
  ModelInputs inputs;
  std::string kind = "mlp";
  std::optional<double> lr;  // kind default when unset
  model::TrainConfig train;
  std::uint64_t seed = 0;
  std::string out;
  std::string history;
};
void run_baseline(const BaselineOptions& options);

struct EvaluateOptions {
  std::string model;
  std::string split;  // defaults to the split recorded with the model
  std::string out;
  std::string part = "test";
  std::string name;  // defaults to the model kind
  bool append = false;
  bool positive_class = false;
};
eval::ReportRow evaluate_model(const EvaluateOptions& options);
void run_evaluate(const EvaluateOptions& options);

struct AblateOptions {
  ModelInputs inputs;
  std::vector<std::string> sets;  // all rows when empty
  model::SageConfig sage;
  model::TrainConfig train;
  std::uint64_t seed = 0;
  std::string out;
  std::string val_out;
};
void run_ablate(const AblateOptions& options);

struct SynthOptions {
  synth::SynthConfig config;
  std::string out;
};
void run_synth(const SynthOptions& options);

struct PipelineOptions {
  std::string input;
  std::string out_dir = "run";
  std::string embeddings;  // precomputed EMB1, fallback hashing otherwise
  double delta_minutes = 15.0;
  std::size_t dim = 768;
  std::uint64_t seed = 7;
  std::array<double, 3> fractions{0.70, 0.15, 0.15};
  std::string feature_set = "phi+emb";
  features::FeatureOptions features;
  model::SageConfig sage;
  model::TrainConfig train;
  std::vector<std::string> baselines{"mlp", "cnn1d", "linear-probe"};
  bool ablate = false;
  std::uint32_t betweenness_samples = 0;
  bool force = false;
};
// Returns the number of stages that ran (the rest were up to date).
std::size_t run_pipeline(const PipelineOptions& options);

}  // namespace engage::cli

#endif  // ENGAGE_TOOLS_COMMANDS_HPP_
