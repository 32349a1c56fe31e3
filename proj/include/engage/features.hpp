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

#ifndef ENGAGE_FEATURES_HPP_
#define ENGAGE_FEATURES_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "engage/ingest.hpp"
#include "engage/nn/tensor.hpp"

namespace engage::features {

using nn::Tensor2;

// Row-per-post numeric features with column names.
struct FeatureMatrix {
  Tensor2 values;
  std::vector<std::string> names;
};

// Column order of the per-post feature block.
const std::vector<std::string>& phi_names();

// followers, n_tweets, following, length_of_post, n_hashtags, n_mentions,
// emojis, official_source, has_media.
FeatureMatrix assemble_phi(const std::vector<ingest::TweetRecord>& records);

void write_phi_csv(const std::string& path, const FeatureMatrix& phi);
FeatureMatrix read_phi_csv(const std::string& path);

// EMB1: "EMB1", u32 rows, u32 dim, then rows of f32, little-endian.
void write_emb1(const std::string& path, const Tensor2& embeddings);
Tensor2 read_emb1(const std::string& path);

// read_emb1 plus a row-count check against the corpus size. Throws
// std::runtime_error("row count mismatch ...") naming both counts.
Tensor2 load_embeddings(const std::string& path, std::size_t expected_rows);

// Lowercased word unigrams: maximal runs of ASCII alphanumerics and
// non-ASCII bytes.
std::vector<std::string> tokenize(std::string_view text);

struct HashedToken {
  std::size_t bucket = 0;
  double sign = 1.0;
};

HashedToken hash_token(std::string_view token, std::size_t dim,
                       std::uint64_t seed);

// Signed feature hashing of word unigrams into `dim` buckets, rows
// L2-normalized. Empty text (or text without tokens) yields a zero row.
Tensor2 fallback_embed(const std::vector<std::string>& texts, std::size_t dim,
                       std::uint64_t seed);

struct Standardizer {
  std::vector<double> means;
  std::vector<double> stds;  // population std; 0 for constant columns

  Tensor2 apply(const Tensor2& x) const;
  Tensor2 invert(const Tensor2& z) const;
};

// Column statistics from `rows` only. Constant columns are centered but not
// scaled. Throws std::invalid_argument on an empty subset.
Standardizer fit_standardizer(const Tensor2& x,
                              std::span<const std::size_t> rows);

std::pair<Tensor2, Standardizer> standardize(const Tensor2& x,
                                             std::span<const std::size_t> rows);

struct PcaModel {
  std::vector<double> mean;
  Tensor2 components;                    // dim x k, orthonormal columns
  std::vector<double> explained_variance;  // eigenvalues, descending
  std::vector<double> explained_ratio;

  Tensor2 transform(const Tensor2& x) const;
  Tensor2 reconstruct(const Tensor2& reduced) const;
};

// Top-k eigenvectors of the covariance of `rows`. Each component is signed so
// its largest-magnitude entry is positive. Throws std::invalid_argument when
// k is 0 or exceeds the column count, or fewer than 2 rows are given.
PcaModel pca_fit(const Tensor2& x, std::size_t k,
                 std::span<const std::size_t> rows);

std::pair<PcaModel, Tensor2> pca_fit_transform(
    const Tensor2& x, std::size_t k, std::span<const std::size_t> rows);

// [phi | emb] restricted to the enabled blocks; both disabled gives a single
// column of ones.
Tensor2 concat_features(const Tensor2& phi, const Tensor2& emb, bool use_phi,
                        bool use_emb);

// Rows of the feature ablation grid.
enum class FeatureSet {
  kNone,       // constant input
  kPhi,        // phi
  kEmb,        // embedding
  kEmbPca,     // PCA(embedding)
  kJointPca,   // PCA(phi | embedding)
  kPhiEmbPca,  // phi | PCA(embedding)
  kFull,       // phi | embedding
};

const std::vector<FeatureSet>& all_feature_sets();
std::string_view feature_set_name(FeatureSet set);
FeatureSet parse_feature_set(std::string_view name);
bool uses_phi(FeatureSet set);
bool uses_emb(FeatureSet set);

struct FeatureOptions {
  std::size_t pca_components = 48;
  bool standardize = true;
};

// Builds the model input for one ablation row. All statistics (z-scores and
// PCA) come from `train_rows`. With standardization on, the phi block is
// z-scored before any PCA. Embedding columns keep their native scale.
Tensor2 make_feature_set(const Tensor2& phi, const Tensor2& emb, FeatureSet set,
                         std::span<const std::size_t> train_rows,
                         const FeatureOptions& options);

}  // namespace engage::features

#endif  // ENGAGE_FEATURES_HPP_
