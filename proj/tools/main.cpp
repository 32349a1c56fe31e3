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

#include <cmath>
#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using namespace engage;

void add_fractions(CLI::App* cmd, std::vector<double>& fractions) {
  cmd->add_option("--fractions", fractions, "train/val/test fractions")
      ->expected(3)
      ->capture_default_str();
}

std::array<double, 3> to_fractions(const std::vector<double>& v) {
  if (v.size() != 3) throw std::invalid_argument("--fractions takes three values");
  if (std::abs(v[0] + v[1] + v[2] - 1.0) > 1e-9) {
    throw std::invalid_argument("--fractions must sum to 1");
  }
  return {v[0], v[1], v[2]};
}

void add_model_inputs(CLI::App* cmd, cli::ModelInputs& in, bool with_graph) {
  if (with_graph) cmd->add_option("--graph", in.graph, "PGR1 graph file")->required();
  cmd->add_option("--phi", in.phi, "per-post feature CSV");
  cmd->add_option("--emb", in.emb, "EMB1 embedding file");
  cmd->add_option("--labels", in.labels, "labels.csv")->required();
  cmd->add_option("--split", in.split, "split JSON, created when missing");
  cmd->add_option("--pca-components", in.features.pca_components)->capture_default_str();
  cmd->add_flag("!--no-standardize", in.features.standardize, "keep raw phi scale");
}

void add_feature_flags(CLI::App* cmd, cli::ModelInputs& in) {
  cmd->add_flag("--use-phi", in.use_phi, "use the per-post feature block");
  cmd->add_flag("--use-emb", in.use_emb, "use the text embedding block");
  cmd->add_flag("--pca", in.pca, "reduce the embedding block with PCA");
  cmd->add_option("--feature-set", in.feature_set,
                  "none, phi, emb, emb-pca, phi-pca+emb-pca, phi+emb-pca or phi+emb");
}

void add_train_config(CLI::App* cmd, model::TrainConfig& t, bool with_lr) {
  if (with_lr) cmd->add_option("--lr", t.lr, "Adam learning rate")->capture_default_str();
  cmd->add_option("--epochs", t.max_epochs, "maximum epochs")->capture_default_str();
  cmd->add_option("--batch-size", t.batch_size)->capture_default_str();
  cmd->add_option("--patience", t.early_stop_patience, "early stopping patience")
      ->capture_default_str();
  cmd->add_option("--pos-weight", t.pos_weight, "positive-class loss weight")
      ->capture_default_str();
}

void add_sage_config(CLI::App* cmd, model::SageConfig& s) {
  cmd->add_option("--hidden", s.hidden, "SAGE hidden width")->capture_default_str();
  cmd->add_option("--layers", s.layers, "number of SAGE layers")->capture_default_str();
  cmd->add_option("--head", s.head, "dense head width")->capture_default_str();
  cmd->add_flag("--weighted-agg", s.weighted_agg, "scale neighbor terms by edge weight");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post engagement prediction over hashtag co-occurrence graphs"};
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "INI file with one section per subcommand");
  app.require_subcommand(1);

  cli::IngestOptions ingest;
  std::string start;
  std::string end;
  auto* c_ingest = app.add_subcommand("ingest", "parse and clean a JSONL corpus");
  c_ingest->add_option("--input", ingest.input)->required();
  c_ingest->add_option("--out", ingest.out)->required();
  c_ingest->add_option("--stats", ingest.stats, "dataset statistics JSON");
  c_ingest->add_option("--start", start, "keep posts at or after this time");
  c_ingest->add_option("--end", end, "keep posts before this time");

  cli::BuildGraphOptions build;
  auto* c_build = app.add_subcommand("build-graph", "build the post graph");
  c_build->add_option("--input", build.input)->required();
  c_build->add_option("--out", build.out)->required();
  c_build->add_option("--delta-minutes", build.delta_minutes)->capture_default_str();
  c_build->add_option("--stats", build.stats, "graph statistics JSON");

  cli::AnalyzeOptions analyze;
  auto* c_analyze = app.add_subcommand("analyze", "centralities and class-split tests");
  c_analyze->add_option("--graph", analyze.graph)->required();
  c_analyze->add_option("--labels", analyze.labels)->required();
  c_analyze->add_option("--out", analyze.out_dir)->required();
  c_analyze->add_option("--input", analyze.input, "corpus for per-user/hashtag counts");
  c_analyze->add_option("--betweenness-samples", analyze.betweenness_samples,
                        "sampled sources for betweenness (0 = exact)");
  c_analyze->add_option("--seed", analyze.seed)->capture_default_str();

  cli::EmbedOptions embed;
  auto* c_embed = app.add_subcommand("embed-fallback", "hashed text embeddings");
  c_embed->add_option("--input", embed.input)->required();
  c_embed->add_option("--out", embed.out)->required();
  c_embed->add_option("--dim", embed.dim)->capture_default_str();
  c_embed->add_option("--seed", embed.seed)->capture_default_str();

  cli::FeaturesOptions feats;
  auto* c_features = app.add_subcommand("features", "per-post features and labels");
  c_features->add_option("--input", feats.input)->required();
  c_features->add_option("--out", feats.out)->required();
  c_features->add_option("--labels", feats.labels, "labels.csv output");

  cli::TrainOptions train;
  std::vector<double> train_fractions{0.70, 0.15, 0.15};
  auto* c_train = app.add_subcommand("train", "train the graph model");
  add_model_inputs(c_train, train.inputs, true);
  add_feature_flags(c_train, train.inputs);
  add_fractions(c_train, train_fractions);
  add_sage_config(c_train, train.sage);
  add_train_config(c_train, train.train, true);
  c_train->add_option("--seed", train.seed)->required();
  c_train->add_option("--out", train.out)->required();
  c_train->add_option("--history", train.history, "per-epoch CSV");

  cli::BaselineOptions base;
  std::vector<double> base_fractions{0.70, 0.15, 0.15};
  double base_lr = 0.0;
  auto* c_base = app.add_subcommand("baseline", "train a non-graph baseline");
  c_base->add_option("--kind", base.kind, "mlp, cnn1d or linear-probe")->capture_default_str();
  add_model_inputs(c_base, base.inputs, false);
  add_feature_flags(c_base, base.inputs);
  add_fractions(c_base, base_fractions);
  add_train_config(c_base, base.train, false);
  auto* base_lr_opt = c_base->add_option("--lr", base_lr, "learning rate (kind default)");
  c_base->add_option("--seed", base.seed)->required();
  c_base->add_option("--out", base.out)->required();
  c_base->add_option("--history", base.history, "per-epoch CSV");

  cli::EvaluateOptions evaluate;
  auto* c_eval = app.add_subcommand("evaluate", "score a trained model");
  c_eval->add_option("--model", evaluate.model)->required();
  c_eval->add_option("--split", evaluate.split, "split JSON (default: the training split)");
  c_eval->add_option("--out", evaluate.out)->required();
  c_eval->add_option("--part", evaluate.part, "train, val or test")->capture_default_str();
  c_eval->add_option("--name", evaluate.name, "row name (default: model kind)");
  c_eval->add_flag("--append", evaluate.append, "append to an existing report");
  c_eval->add_flag("--positive-class-only", evaluate.positive_class,
                   "positive-class precision/recall instead of macro");

  cli::AblateOptions ablate;
  std::vector<double> ablate_fractions{0.70, 0.15, 0.15};
  auto* c_ablate = app.add_subcommand("ablate", "feature ablation grid");
  add_model_inputs(c_ablate, ablate.inputs, true);
  add_fractions(c_ablate, ablate_fractions);
  add_sage_config(c_ablate, ablate.sage);
  add_train_config(c_ablate, ablate.train, true);
  c_ablate->add_option("--sets", ablate.sets, "subset of rows (default: all)");
  c_ablate->add_option("--seed", ablate.seed)->required();
  c_ablate->add_option("--out", ablate.out, "test-split report CSV")->required();
  c_ablate->add_option("--val-out", ablate.val_out, "validation-split report CSV");

  cli::SynthOptions syn;
  auto* c_synth = app.add_subcommand("synth", "generate a planted-homophily corpus");
  c_synth->add_option("--n-posts", syn.config.n_posts)->capture_default_str();
  c_synth->add_option("--homophily", syn.config.homophily)
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  c_synth->add_option("--seed", syn.config.seed)->capture_default_str();
  c_synth->add_option("--groups", syn.config.groups)->capture_default_str();
  c_synth->add_option("--out", syn.out)->required();

  cli::PipelineOptions pipe;
  std::vector<double> pipe_fractions{0.70, 0.15, 0.15};
  auto* c_pipe = app.add_subcommand("pipeline", "run every stage with skipping");
  c_pipe->add_option("--input", pipe.input)->required();
  c_pipe->add_option("--out-dir", pipe.out_dir)->capture_default_str();
  c_pipe->add_option("--embeddings", pipe.embeddings, "precomputed EMB1 file");
  c_pipe->add_option("--delta-minutes", pipe.delta_minutes)->capture_default_str();
  c_pipe->add_option("--dim", pipe.dim, "fallback embedding width")->capture_default_str();
  c_pipe->add_option("--seed", pipe.seed, "master seed")->capture_default_str();
  add_fractions(c_pipe, pipe_fractions);
  c_pipe->add_option("--feature-set", pipe.feature_set)->capture_default_str();
  c_pipe->add_option("--pca-components", pipe.features.pca_components)->capture_default_str();
  c_pipe->add_flag("!--no-standardize", pipe.features.standardize, "keep raw phi scale");
  add_sage_config(c_pipe, pipe.sage);
  add_train_config(c_pipe, pipe.train, true);
  c_pipe->add_option("--baselines", pipe.baselines)->capture_default_str();
  c_pipe->add_flag("--ablate", pipe.ablate, "also run the ablation grid");
  c_pipe->add_option("--betweenness-samples", pipe.betweenness_samples);
  c_pipe->add_flag("--force", pipe.force, "rerun every stage");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_ingest->parsed()) {
      if (!start.empty()) ingest.start = start;
      if (!end.empty()) ingest.end = end;
      cli::run_ingest(ingest);
    } else if (c_build->parsed()) {
      cli::run_build_graph(build);
    } else if (c_analyze->parsed()) {
      cli::run_analyze(analyze);
    } else if (c_embed->parsed()) {
      cli::run_embed_fallback(embed);
    } else if (c_features->parsed()) {
      cli::run_features(feats);
    } else if (c_train->parsed()) {
      train.inputs.fractions = to_fractions(train_fractions);
      cli::run_train(train);
    } else if (c_base->parsed()) {
      base.inputs.fractions = to_fractions(base_fractions);
      if (base_lr_opt->count() > 0) base.lr = base_lr;
      cli::run_baseline(base);
    } else if (c_eval->parsed()) {
      cli::run_evaluate(evaluate);
    } else if (c_ablate->parsed()) {
      ablate.inputs.fractions = to_fractions(ablate_fractions);
      cli::run_ablate(ablate);
    } else if (c_synth->parsed()) {
      cli::run_synth(syn);
    } else if (c_pipe->parsed()) {
      pipe.fractions = to_fractions(pipe_fractions);
      const std::size_t ran = cli::run_pipeline(pipe);
      std::fprintf(stderr, "pipeline: %zu stage(s) ran\n", ran);
    }
  } catch (const cli::InputNotFound& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
