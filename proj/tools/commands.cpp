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

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include "engage/netstats.hpp"
#include "engage/nn/checkpoint.hpp"
#include "engage/postgraph.hpp"
#include "json.hpp"

namespace engage::cli {

namespace fs = std::filesystem;
using features::FeatureSet;
using features::Tensor2;
using json = nlohmann::ordered_json;

void require_input(const std::string& path) {
  if (path.empty() || !fs::exists(path)) throw InputNotFound(path);
}

namespace {

void ensure_parent(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

std::ofstream open_out(const std::string& path) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream out = open_out(path);
  out << doc.dump(2) << '\n';
}

json read_json(const std::string& path) {
  require_input(path);
  std::ifstream in(path);
  return json::parse(in);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<ingest::TweetRecord> load_corpus(const std::string& path) {
  require_input(path);
  ingest::ParseResult parsed = ingest::parse_corpus_file(path);
  for (const auto& w : parsed.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  if (parsed.malformed > 0 || parsed.filtered_lang > 0) {
    std::fprintf(stderr, "%s: %zu malformed lines skipped, %zu non-en posts dropped\n",
                 path.c_str(), parsed.malformed, parsed.filtered_lang);
  }
  return std::move(parsed.records);
}

json stats_json(const ingest::DatasetStats& s) {
  return json{{"n_days", s.n_days},
              {"n_users", s.n_users},
              {"n_posts", s.n_posts},
              {"mean_posts_per_day", s.mean_posts_per_day},
              {"n_unique_hashtags", s.n_unique_hashtags},
              {"median_posts_per_user", s.median_posts_per_user},
              {"max_posts_per_user", s.max_posts_per_user}};
}

json graph_stats_json(const graph::GraphStats& s) {
  return json{{"n_nodes", s.n_nodes},
              {"n_edges", s.n_edges},
              {"density", s.density},
              {"n_connected_components", s.n_connected_components},
              {"max_component_size", s.max_component_size}};
}

// Everything a trained model needs besides its weights.
struct LoadedData {
  graph::PostGraph graph;
  std::vector<int> labels;
  eval::Split split;
  std::string split_path;
  FeatureSet set = FeatureSet::kNone;
  Tensor2 x;
};

eval::Split obtain_split(const std::string& path, std::span<const int> labels,
                         const std::array<double, 3>& fractions,
                         std::uint64_t seed) {
  if (fs::exists(path)) {
    eval::Split split = eval::read_split_json(path);
    const std::size_t total = split.train.size() + split.val.size() + split.test.size();
    if (total != labels.size()) {
      throw std::runtime_error("split " + path + " covers " + std::to_string(total) +
                               " nodes, labels have " + std::to_string(labels.size()));
    }
    return split;
  }
  eval::Split split = eval::make_split(labels, fractions, seed);
  ensure_parent(path);
  eval::write_split_json(path, split);
  return split;
}

LoadedData load_data(const ModelInputs& in, std::uint64_t seed,
                     const std::string& default_split, bool need_graph) {
  LoadedData data;
  require_input(in.labels);
  data.labels = read_labels_csv(in.labels).labels;
  const std::size_t n = data.labels.size();
  if (need_graph) {
    require_input(in.graph);
    data.graph = graph::read_graph(in.graph);
    if (data.graph.n_nodes() != n) {
      throw std::runtime_error("graph has " + std::to_string(data.graph.n_nodes()) +
                               " nodes, labels have " + std::to_string(n));
    }
  }
  data.set = resolve_feature_set(in);
  Tensor2 phi(n, 0);
  Tensor2 emb(n, 0);
  if (features::uses_phi(data.set)) {
    require_input(in.phi);
    phi = features::read_phi_csv(in.phi).values;
    if (phi.rows() != n) {
      throw std::runtime_error("row count mismatch in " + in.phi + ": expected " +
                               std::to_string(n) + ", found " +
                               std::to_string(phi.rows()));
    }
  }
  if (features::uses_emb(data.set)) {
    require_input(in.emb);
    emb = features::load_embeddings(in.emb, n);
  }
  data.split_path = in.split.empty() ? default_split : in.split;
  data.split = obtain_split(data.split_path, data.labels, in.fractions, seed);
  data.x = features::make_feature_set(phi, emb, data.set, data.split.train, in.features);
  return data;
}

json inputs_json(const ModelInputs& in, FeatureSet set, const std::string& split) {
  return json{{"graph", in.graph},
              {"phi", in.phi},
              {"emb", in.emb},
              {"labels", in.labels},
              {"split", split},
              {"feature_set", std::string(features::feature_set_name(set))},
              {"pca_components", in.features.pca_components},
              {"standardize", in.features.standardize}};
}

ModelInputs inputs_from_json(const json& j) {
  ModelInputs in;
  in.graph = j.at("graph").get<std::string>();
  in.phi = j.at("phi").get<std::string>();
  in.emb = j.at("emb").get<std::string>();
  in.labels = j.at("labels").get<std::string>();
  in.split = j.at("split").get<std::string>();
  in.feature_set = j.at("feature_set").get<std::string>();
  in.features.pca_components = j.at("pca_components").get<std::size_t>();
  in.features.standardize = j.at("standardize").get<bool>();
  return in;
}

std::string sidecar_path(const std::string& model) { return model + ".json"; }

void print_history_summary(const model::TrainResult& result) {
  const auto& best = result.history[result.best_epoch - 1];
  std::fprintf(stderr, "trained %zu epochs, best epoch %zu: val loss %.6f, val acc %.4f\n",
               result.history.size(), result.best_epoch, best.val_loss,
               best.val_accuracy);
}

std::vector<double> as_double(std::span<const std::uint32_t> v) {
  return {v.begin(), v.end()};
}

void write_counts(const std::string& path, std::span<const double> values,
                  const std::string& column) {
  std::ofstream out = open_out(path);
  out << column << ",count\n";
  for (const auto& [value, count] : netstats::value_counts(values)) {
    out << fmt(value) << ',' << count << '\n';
  }
}

}  // namespace

void write_labels_csv(const std::string& path,
                      const std::vector<ingest::TweetRecord>& records) {
  std::ofstream out = open_out(path);
  out << "node,id,engagement,label\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::uint64_t e = ingest::compute_engagement(records[i]);
    out << i << ',' << records[i].id << ',' << e << ',' << ingest::assign_label(e)
        << '\n';
  }
}

LabelTable read_labels_csv(const std::string& path) {
  require_input(path);
  std::ifstream in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("node,id,engagement,label", 0) != 0) {
    throw std::runtime_error(path + ": expected header node,id,engagement,label");
  }
  LabelTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4 || std::stoull(cells[0]) != table.ids.size()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed row");
    }
    const int label = std::stoi(cells[3]);
    if (label != 0 && label != 1) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": label must be 0 or 1");
    }
    table.ids.push_back(cells[1]);
    table.engagement.push_back(std::stoull(cells[2]));
    table.labels.push_back(label);
  }
  return table;
}

void run_ingest(const IngestOptions& options) {
  std::vector<ingest::TweetRecord> records = load_corpus(options.input);
  if (options.start || options.end) {
    const std::int64_t start = options.start ? ingest::parse_timestamp(*options.start)
                                             : std::numeric_limits<std::int64_t>::min();
    const std::int64_t end = options.end ? ingest::parse_timestamp(*options.end)
                                         : std::numeric_limits<std::int64_t>::max();
    records = ingest::filter_window(records, start, end);
  }
  std::ofstream out = open_out(options.out);
  for (const auto& r : records) out << ingest::serialize_record(r) << '\n';
  out.close();
  const ingest::DatasetStats stats = ingest::dataset_stats(records);
  if (!options.stats.empty()) write_json(options.stats, stats_json(stats));
  std::fprintf(stderr, "ingest: %llu posts, %llu users, %llu days\n",
               static_cast<unsigned long long>(stats.n_posts),
               static_cast<unsigned long long>(stats.n_users),
               static_cast<unsigned long long>(stats.n_days));
}

void run_build_graph(const BuildGraphOptions& options) {
  if (!(options.delta_minutes > 0.0)) {
    throw std::invalid_argument("delta-minutes must be positive");
  }
  const std::vector<ingest::TweetRecord> records = load_corpus(options.input);
  const auto delta = static_cast<std::int64_t>(std::llround(options.delta_minutes * 60.0));
  const graph::PostGraph g = graph::build_graph(records, delta);
  ensure_parent(options.out);
  graph::write_graph(options.out, g);
  graph::write_ids(options.out + ".ids", records);
  const graph::GraphStats stats = graph::graph_stats(g);
  if (!options.stats.empty()) write_json(options.stats, graph_stats_json(stats));
  std::fprintf(stderr, "build-graph: %llu nodes, %llu edges, %llu components\n",
               static_cast<unsigned long long>(stats.n_nodes),
               static_cast<unsigned long long>(stats.n_edges),
               static_cast<unsigned long long>(stats.n_connected_components));
}

void run_analyze(const AnalyzeOptions& options) {
  require_input(options.graph);
  const graph::PostGraph g = graph::read_graph(options.graph);
  const std::vector<int> labels = read_labels_csv(options.labels).labels;
  if (labels.size() != g.n_nodes()) {
    throw std::runtime_error("graph has " + std::to_string(g.n_nodes()) +
                             " nodes, labels have " + std::to_string(labels.size()));
  }
  const std::string dir = options.out_dir;
  fs::create_directories(dir);

  std::vector<std::string> names = {"weighted_degree", "closeness", "betweenness",
                                    "eigenvector"};
  std::vector<std::vector<double>> columns;
  columns.push_back(netstats::weighted_degree(g));
  columns.push_back(netstats::closeness(g));
  columns.push_back(options.betweenness_samples > 0
                        ? netstats::betweenness_sampled(g, options.betweenness_samples,
                                                        options.seed)
                        : netstats::betweenness(g));
  const netstats::EigenvectorResult eig = netstats::eigenvector(g);
  if (!eig.converged) {
    std::fprintf(stderr, "warning: eigenvector centrality did not converge in %u iterations\n",
                 eig.iterations);
  }
  columns.push_back(eig.values);

  {
    std::ofstream out = open_out(dir + "/centralities.csv");
    out << "node,label";
    for (const auto& name : names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < labels.size(); ++i) {
      out << i << ',' << labels[i];
      for (const auto& col : columns) out << ',' << fmt(col[i]);
      out << '\n';
    }
  }
  {
    std::ofstream out = open_out(dir + "/ks.csv");
    out << "measure,n0,mean0,std0,n1,mean1,std1,ks_statistic,p_value\n";
    for (std::size_t c = 0; c < names.size(); ++c) {
      const netstats::ClassSplitSummary s =
          netstats::class_split_summary(columns[c], labels);
      out << names[c] << ',' << s.n0 << ',' << fmt(s.mean0) << ',' << fmt(s.std0) << ','
          << s.n1 << ',' << fmt(s.mean1) << ',' << fmt(s.std1) << ','
          << fmt(s.ks.statistic) << ',' << fmt(s.ks.p_value) << '\n';
    }
  }
  {
    const auto corr = netstats::correlation_matrix(columns);
    std::ofstream out = open_out(dir + "/correlations.csv");
    out << "measure";
    for (const auto& name : names) out << ',' << name;
    out << '\n';
    for (std::size_t r = 0; r < names.size(); ++r) {
      out << names[r];
      for (double v : corr[r]) out << ',' << fmt(v);
      out << '\n';
    }
  }
  std::vector<double> degree(g.n_nodes());
  for (std::uint32_t i = 0; i < g.n_nodes(); ++i) degree[i] = g.degree(i);
  write_counts(dir + "/counts_degree.csv", degree, "degree");
  write_counts(dir + "/counts_weighted_degree.csv", columns[0], "weighted_degree");
  if (!options.input.empty()) {
    const std::vector<ingest::TweetRecord> records = load_corpus(options.input);
    std::map<std::string, std::uint32_t> per_user;
    std::map<std::string, std::uint32_t> per_tag;
    for (const auto& r : records) {
      ++per_user[r.author];
      for (const auto& t : r.hashtags) ++per_tag[t];
    }
    std::vector<std::uint32_t> users;
    std::vector<std::uint32_t> tags;
    for (const auto& [k, v] : per_user) users.push_back(v);
    for (const auto& [k, v] : per_tag) tags.push_back(v);
    write_counts(dir + "/counts_posts_per_user.csv", as_double(users), "posts");
    write_counts(dir + "/counts_posts_per_hashtag.csv", as_double(tags), "posts");
  }
  std::fprintf(stderr, "analyze: wrote %s\n", dir.c_str());
}

void run_embed_fallback(const EmbedOptions& options) {
  if (options.dim == 0) throw std::invalid_argument("dim must be positive");
  const std::vector<ingest::TweetRecord> records = load_corpus(options.input);
  std::vector<std::string> texts;
  texts.reserve(records.size());
  for (const auto& r : records) texts.push_back(r.text);
  const Tensor2 emb = features::fallback_embed(texts, options.dim, options.seed);
  ensure_parent(options.out);
  features::write_emb1(options.out, emb);
  std::fprintf(stderr, "embed-fallback: %zu x %zu\n", emb.rows(), emb.cols());
}

void run_features(const FeaturesOptions& options) {
  const std::vector<ingest::TweetRecord> records = load_corpus(options.input);
  ensure_parent(options.out);
  features::write_phi_csv(options.out, features::assemble_phi(records));
  if (!options.labels.empty()) write_labels_csv(options.labels, records);
  std::fprintf(stderr, "features: %zu rows\n", records.size());
}

FeatureSet resolve_feature_set(const ModelInputs& inputs) {
  if (!inputs.feature_set.empty()) return features::parse_feature_set(inputs.feature_set);
  if (inputs.use_phi && inputs.use_emb) {
    return inputs.pca ? FeatureSet::kPhiEmbPca : FeatureSet::kFull;
  }
  if (inputs.use_emb) return inputs.pca ? FeatureSet::kEmbPca : FeatureSet::kEmb;
  if (inputs.use_phi) return FeatureSet::kPhi;
  return FeatureSet::kNone;
}

void run_train(const TrainOptions& options) {
  LoadedData data = load_data(options.inputs, options.seed, options.out + ".split.json", true);
  model::SageModel net(data.x, data.graph, options.sage, options.seed);
  model::TrainConfig config = options.train;
  config.seed = options.seed;
  const model::TrainResult result =
      model::train(net, data.labels, data.split.train, data.split.val, config);
  print_history_summary(result);
  ensure_parent(options.out);
  nn::write_checkpoint(options.out, model::export_layers(net));
  if (!options.history.empty()) {
    ensure_parent(options.history);
    model::write_history_csv(options.history, result.history);
  }
  json meta = {{"kind", "tweetgage"}, {"seed", options.seed}};
  meta["inputs"] = inputs_json(options.inputs, data.set, data.split_path);
  meta["sage"] = {{"hidden", options.sage.hidden},
                  {"layers", options.sage.layers},
                  {"head", options.sage.head},
                  {"weighted_agg", options.sage.weighted_agg}};
  write_json(sidecar_path(options.out), meta);
}

void run_baseline(const BaselineOptions& options) {
  const baselines::BaselineKind kind = baselines::parse_baseline(options.kind);
  LoadedData data = load_data(options.inputs, options.seed, options.out + ".split.json", false);
  std::unique_ptr<model::Classifier> net = baselines::make_baseline(kind, data.x, options.seed);
  model::TrainConfig config = options.train;
  config.lr = options.lr.value_or(baselines::default_lr(kind));
  config.seed = options.seed;
  const model::TrainResult result =
      model::train(*net, data.labels, data.split.train, data.split.val, config);
  print_history_summary(result);
  ensure_parent(options.out);
  nn::write_checkpoint(options.out, model::export_layers(*net));
  if (!options.history.empty()) {
    ensure_parent(options.history);
    model::write_history_csv(options.history, result.history);
  }
  json meta = {{"kind", std::string(baselines::baseline_name(kind))}, {"seed", options.seed}};
  meta["inputs"] = inputs_json(options.inputs, data.set, data.split_path);
  write_json(sidecar_path(options.out), meta);
}

eval::ReportRow evaluate_model(const EvaluateOptions& options) {
  require_input(options.model);
  const json meta = read_json(sidecar_path(options.model));
  const std::string kind = meta.at("kind").get<std::string>();
  const std::uint64_t seed = meta.at("seed").get<std::uint64_t>();
  ModelInputs inputs = inputs_from_json(meta.at("inputs"));
  if (!options.split.empty()) inputs.split = options.split;
  require_input(inputs.split);
  const bool graph_model = kind == "tweetgage";
  LoadedData data = load_data(inputs, seed, inputs.split, graph_model);

  std::unique_ptr<model::Classifier> net;
  if (graph_model) {
    const json& s = meta.at("sage");
    model::SageConfig config;
    config.hidden = s.at("hidden").get<std::size_t>();
    config.layers = s.at("layers").get<std::size_t>();
    config.head = s.at("head").get<std::size_t>();
    config.weighted_agg = s.at("weighted_agg").get<bool>();
    net = std::make_unique<model::SageModel>(data.x, data.graph, config, seed);
  } else {
    net = baselines::make_baseline(baselines::parse_baseline(kind), data.x, seed);
  }
  model::import_layers(*net, nn::read_checkpoint(options.model));
  const std::vector<double> probs = model::predict_proba(*net);

  const std::vector<std::size_t>* rows = nullptr;
  if (options.part == "train") {
    rows = &data.split.train;
  } else if (options.part == "val") {
    rows = &data.split.val;
  } else if (options.part == "test") {
    rows = &data.split.test;
  } else {
    throw std::invalid_argument("part must be train, val or test, got " + options.part);
  }
  const eval::Averaging averaging =
      options.positive_class ? eval::Averaging::kPositiveClass : eval::Averaging::kMacro;
  return {options.name.empty() ? kind : options.name,
          eval::evaluate(probs, data.labels, *rows, averaging)};
}

void run_evaluate(const EvaluateOptions& options) {
  const eval::ReportRow row = evaluate_model(options);
  std::vector<eval::ReportRow> rows;
  if (options.append && fs::exists(options.out)) rows = eval::read_report_csv(options.out);
  rows.push_back(row);
  ensure_parent(options.out);
  eval::write_report_csv(options.out, rows);
  const eval::EvalReport& r = row.report;
  std::printf("%s %s: acc %.4f prec %.4f recall %.4f auc_roc %.4f auc_pr %.4f f1 %.4f\n",
              row.name.c_str(), options.part.c_str(), r.accuracy, r.precision, r.recall,
              r.auc_roc, r.auc_pr, r.f1);
}

void run_ablate(const AblateOptions& options) {
  const ModelInputs& in = options.inputs;
  require_input(in.graph);
  require_input(in.phi);
  require_input(in.emb);
  const std::vector<int> labels = read_labels_csv(in.labels).labels;
  const graph::PostGraph g = graph::read_graph(in.graph);
  const Tensor2 phi = features::read_phi_csv(in.phi).values;
  const Tensor2 emb = features::load_embeddings(in.emb, labels.size());
  if (g.n_nodes() != labels.size() || phi.rows() != labels.size()) {
    throw std::runtime_error("graph, phi and labels disagree on the node count");
  }
  const std::string split_path = in.split.empty() ? options.out + ".split.json" : in.split;
  const eval::Split split = obtain_split(split_path, labels, in.fractions, options.seed);

  eval::AblationConfig config;
  if (!options.sets.empty()) {
    config.grid.clear();
    for (const auto& name : options.sets) config.grid.push_back(features::parse_feature_set(name));
  }
  config.features = in.features;
  config.sage = options.sage;
  config.train = options.train;
  config.seed = options.seed;
  const std::vector<eval::AblationRow> rows =
      eval::run_ablation(phi, emb, g, labels, split, config);

  std::vector<eval::ReportRow> test_rows;
  std::vector<eval::ReportRow> val_rows;
  for (const auto& row : rows) {
    const std::string name(features::feature_set_name(row.set));
    test_rows.push_back({name, row.test});
    val_rows.push_back({name, row.val});
    std::printf("%-16s val auc %.4f acc %.4f | test auc %.4f acc %.4f | %zu epochs\n",
                name.c_str(), row.val.auc_roc, row.val.accuracy, row.test.auc_roc,
                row.test.accuracy, row.training.history.size());
  }
  ensure_parent(options.out);
  eval::write_report_csv(options.out, test_rows);
  if (!options.val_out.empty()) {
    ensure_parent(options.val_out);
    eval::write_report_csv(options.val_out, val_rows);
  }
}

void run_synth(const SynthOptions& options) {
  const std::vector<ingest::TweetRecord> records = synth::generate(options.config);
  ensure_parent(options.out);
  synth::write_corpus(options.out, records);
  std::fprintf(stderr, "synth: %zu posts\n", records.size());
}

}  // namespace engage::cli
