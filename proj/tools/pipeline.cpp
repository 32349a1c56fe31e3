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

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "commands.hpp"
#include "engage/common/random.hpp"
#include "json.hpp"

namespace engage::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 initialization failed");
  }
  std::vector<char> buffer(1 << 16);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    EVP_DigestUpdate(ctx, buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx, digest, &length);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(byte, sizeof(byte), "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

std::string sha256_text(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(byte, sizeof(byte), "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

struct Stage {
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  json config;
  std::function<void()> run;
};

json train_json(const model::TrainConfig& t) {
  return json{{"lr", t.lr},
              {"batch_size", t.batch_size},
              {"max_epochs", t.max_epochs},
              {"plateau_patience", t.plateau_patience},
              {"plateau_factor", t.plateau_factor},
              {"min_lr", t.min_lr},
              {"early_stop_patience", t.early_stop_patience},
              {"min_delta", t.min_delta},
              {"pos_weight", t.pos_weight}};
}

json config_json(const PipelineOptions& o) {
  return json{{"input", o.input},
              {"out_dir", o.out_dir},
              {"embeddings", o.embeddings},
              {"delta_minutes", o.delta_minutes},
              {"dim", o.dim},
              {"seed", o.seed},
              {"fractions", o.fractions},
              {"feature_set", o.feature_set},
              {"pca_components", o.features.pca_components},
              {"standardize", o.features.standardize},
              {"sage",
               {{"hidden", o.sage.hidden},
                {"layers", o.sage.layers},
                {"head", o.sage.head},
                {"weighted_agg", o.sage.weighted_agg}}},
              {"train", train_json(o.train)},
              {"baselines", o.baselines},
              {"ablate", o.ablate},
              {"betweenness_samples", o.betweenness_samples}};
}

class Runner {
 public:
  Runner(std::string dir, json config, bool force)
      : dir_(std::move(dir)), force_(force) {
    manifest_["config"] = std::move(config);
    manifest_["stages"] = json::array();
    const std::string path = manifest_path();
    if (fs::exists(path)) {
      std::ifstream in(path);
      const json previous = json::parse(in, nullptr, false);
      if (previous.is_object() && previous.contains("stages")) {
        for (const auto& s : previous["stages"]) previous_[s.value("name", "")] = s;
      }
    }
  }

  std::size_t ran() const { return ran_; }

  void execute(const Stage& stage) {
    std::string material = stage.name + '\n' + stage.config.dump() + '\n';
    for (const auto& input : stage.inputs) material += sha256_file(input) + '\n';
    const std::string key = sha256_text(material);

    json entry = {{"name", stage.name}, {"key", key}};
    if (up_to_date(stage, key)) {
      std::fprintf(stderr, "[%s] up to date\n", stage.name.c_str());
      entry["status"] = "ok";
      entry["outputs"] = previous_.at(stage.name).at("outputs");
      record(entry);
      return;
    }
    std::fprintf(stderr, "[%s] running\n", stage.name.c_str());
    try {
      stage.run();
    } catch (const std::exception& e) {
      entry["status"] = "failed";
      entry["error"] = e.what();
      record(entry);
      throw;
    }
    entry["status"] = "ok";
    json outputs = json::object();
    for (const auto& output : stage.outputs) outputs[relative(output)] = sha256_file(output);
    entry["outputs"] = std::move(outputs);
    record(entry);
    ++ran_;
  }

 private:
  std::string manifest_path() const { return dir_ + "/manifest.json"; }

  std::string relative(const std::string& path) const {
    return fs::path(path).lexically_relative(dir_).generic_string();
  }

  bool up_to_date(const Stage& stage, const std::string& key) const {
    if (force_) return false;
    const auto it = previous_.find(stage.name);
    if (it == previous_.end()) return false;
    const json& prev = it->second;
    if (prev.value("status", "") != "ok" || prev.value("key", "") != key) return false;
    const json& recorded = prev.at("outputs");
    fs::file_time_type newest_input = fs::file_time_type::min();
    for (const auto& input : stage.inputs) {
      newest_input = std::max(newest_input, fs::last_write_time(input));
    }
    for (const auto& output : stage.outputs) {
      const std::string rel = relative(output);
      if (!fs::exists(output) || !recorded.contains(rel)) return false;
      if (fs::last_write_time(output) < newest_input) return false;
      if (recorded.at(rel).get<std::string>() != sha256_file(output)) return false;
    }
    return true;
  }

  void record(const json& entry) {
    manifest_["stages"].push_back(entry);
    fs::create_directories(dir_);
    std::ofstream out(manifest_path(), std::ios::binary);
    out << manifest_.dump(2) << '\n';
  }

  std::string dir_;
  bool force_;
  json manifest_;
  std::map<std::string, json> previous_;
  std::size_t ran_ = 0;
};

}  // namespace

std::size_t run_pipeline(const PipelineOptions& o) {
  require_input(o.input);
  if (!o.embeddings.empty()) require_input(o.embeddings);
  if (!(o.delta_minutes > 0.0)) throw std::invalid_argument("delta-minutes must be positive");
  features::parse_feature_set(o.feature_set);
  for (const auto& kind : o.baselines) baselines::parse_baseline(kind);

  const std::string d = o.out_dir;
  fs::create_directories(d);
  const std::string posts = d + "/posts.jsonl";
  const std::string dataset_stats = d + "/dataset_stats.json";
  const std::string graph = d + "/graph.pgr";
  const std::string graph_stats = d + "/graph_stats.json";
  const std::string phi = d + "/phi.csv";
  const std::string labels = d + "/labels.csv";
  const std::string emb = o.embeddings.empty() ? d + "/emb.emb1" : o.embeddings;
  const std::string stats_dir = d + "/stats";
  const std::string split = d + "/split.json";
  const std::string model = d + "/model.tgm1";
  const std::string report = d + "/report.csv";

  Runner runner(d, config_json(o), o.force);

  runner.execute({"ingest", {o.input}, {posts, dataset_stats}, json::object(), [&] {
                    run_ingest({o.input, posts, dataset_stats, std::nullopt, std::nullopt});
                  }});
  runner.execute({"build-graph",
                  {posts},
                  {graph, graph + ".ids", graph_stats},
                  {{"delta_minutes", o.delta_minutes}},
                  [&] { run_build_graph({posts, graph, o.delta_minutes, graph_stats}); }});
  runner.execute({"features", {posts}, {phi, labels}, json::object(),
                  [&] { run_features({posts, phi, labels}); }});
  if (o.embeddings.empty()) {
    const std::uint64_t seed = derive_seed(o.seed, "pipeline/embed");
    runner.execute({"embed-fallback", {posts}, {emb}, {{"dim", o.dim}, {"seed", seed}},
                    [&] { run_embed_fallback({posts, emb, o.dim, seed}); }});
  }
  {
    const std::uint64_t seed = derive_seed(o.seed, "pipeline/analyze");
    std::vector<std::string> outputs;
    for (const char* f : {"centralities.csv", "ks.csv", "correlations.csv", "counts_degree.csv",
                          "counts_weighted_degree.csv", "counts_posts_per_user.csv",
                          "counts_posts_per_hashtag.csv"}) {
      outputs.push_back(stats_dir + "/" + f);
    }
    runner.execute({"analyze",
                    {graph, labels, posts},
                    outputs,
                    {{"betweenness_samples", o.betweenness_samples}, {"seed", seed}},
                    [&] {
                      run_analyze({graph, labels, stats_dir, posts, o.betweenness_samples, seed});
                    }});
  }
  {
    const std::uint64_t seed = derive_seed(o.seed, "pipeline/split");
    runner.execute({"split", {labels}, {split}, {{"fractions", o.fractions}, {"seed", seed}}, [&] {
                      const LabelTable table = read_labels_csv(labels);
                      eval::write_split_json(split, eval::make_split(table.labels, o.fractions, seed));
                    }});
  }

  ModelInputs inputs;
  inputs.graph = graph;
  inputs.phi = phi;
  inputs.emb = emb;
  inputs.labels = labels;
  inputs.split = split;
  inputs.fractions = o.fractions;
  inputs.feature_set = o.feature_set;
  inputs.features = o.features;
  const json feature_config = {{"feature_set", o.feature_set},
                               {"pca_components", o.features.pca_components},
                               {"standardize", o.features.standardize}};

  std::vector<std::string> eval_inputs = {graph, phi, emb, labels, split};
  {
    TrainOptions t;
    t.inputs = inputs;
    t.sage = o.sage;
    t.train = o.train;
    t.seed = derive_seed(o.seed, "pipeline/train");
    t.out = model;
    t.history = d + "/history.csv";
    json config = {{"features", feature_config},
                   {"sage", config_json(o).at("sage")},
                   {"train", train_json(o.train)},
                   {"seed", t.seed}};
    runner.execute({"train", {graph, phi, emb, labels, split},
                    {model, model + ".json", t.history}, config, [&] { run_train(t); }});
    eval_inputs.push_back(model);
    eval_inputs.push_back(model + ".json");
  }
  std::vector<std::string> baseline_models;
  for (const auto& kind : o.baselines) {
    BaselineOptions b;
    b.inputs = inputs;
    b.kind = kind;
    b.train = o.train;
    b.seed = derive_seed(o.seed, "pipeline/baseline/" + kind);
    b.out = d + "/" + kind + ".tgm1";
    b.history = d + "/" + kind + "_history.csv";
    json train_config = train_json(o.train);
    train_config["lr"] = baselines::default_lr(baselines::parse_baseline(kind));
    json config = {{"features", feature_config}, {"train", train_config}, {"seed", b.seed}};
    runner.execute({"baseline-" + kind, {phi, emb, labels, split},
                    {b.out, b.out + ".json", b.history}, config, [&] { run_baseline(b); }});
    baseline_models.push_back(b.out);
    eval_inputs.push_back(b.out);
    eval_inputs.push_back(b.out + ".json");
  }
  runner.execute({"evaluate", eval_inputs, {report}, json::object(), [&] {
                    std::vector<eval::ReportRow> rows;
                    EvaluateOptions e;
                    e.split = split;
                    e.model = model;
                    rows.push_back(evaluate_model(e));
                    for (const auto& m : baseline_models) {
                      e.model = m;
                      rows.push_back(evaluate_model(e));
                    }
                    eval::write_report_csv(report, rows);
                  }});
  if (o.ablate) {
    AblateOptions a;
    a.inputs = inputs;
    a.inputs.feature_set.clear();
    a.sage = o.sage;
    a.train = o.train;
    a.seed = derive_seed(o.seed, "pipeline/ablate");
    a.out = d + "/ablation.csv";
    a.val_out = d + "/ablation_val.csv";
    json config = {{"features", feature_config},
                   {"sage", config_json(o).at("sage")},
                   {"train", train_json(o.train)},
                   {"seed", a.seed}};
    runner.execute({"ablate", {graph, phi, emb, labels, split}, {a.out, a.val_out}, config,
                    [&] { run_ablate(a); }});
  }
  return runner.ran();
}

}  // namespace engage::cli
