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

#include "engage/features.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "engage/common/binary_io.hpp"
#include "engage/common/random.hpp"

namespace engage::features {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(std::string_view field, const std::string& path) {
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::runtime_error("bad number '" + std::string(field) + "' in " +
                             path);
  }
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

Tensor2 zscore(const Tensor2& x, std::span<const std::size_t> rows) {
  return fit_standardizer(x, rows).apply(x);
}

}  // namespace

const std::vector<std::string>& phi_names() {
  static const std::vector<std::string> names = {
      "followers",  "n_tweets",   "following",
      "length_of_post", "n_hashtags", "n_mentions",
      "emojis",     "official_source", "has_media"};
  return names;
}

FeatureMatrix assemble_phi(const std::vector<ingest::TweetRecord>& records) {
  FeatureMatrix out;
  out.names = phi_names();
  out.values = Tensor2(records.size(), out.names.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto row = out.values.row(i);
    row[0] = static_cast<double>(r.followers);
    row[1] = static_cast<double>(r.n_tweets);
    row[2] = static_cast<double>(r.following);
    row[3] = static_cast<double>(r.length_of_post);
    row[4] = static_cast<double>(r.n_hashtags);
    row[5] = static_cast<double>(r.n_mentions);
    row[6] = static_cast<double>(r.emojis);
    row[7] = r.official_source ? 1.0 : 0.0;
    row[8] = r.has_media ? 1.0 : 0.0;
  }
  return out;
}

void write_phi_csv(const std::string& path, const FeatureMatrix& phi) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write features " + path);
  out << "node";
  for (const auto& name : phi.names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < phi.values.rows(); ++i) {
    out << i;
    for (const double v : phi.values.row(i)) out << ',' << format_double(v);
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed writing features " + path);
}

FeatureMatrix read_phi_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read features " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty feature file " + path);
  }
  FeatureMatrix out;
  const auto header = split_csv(line);
  if (header.empty() || header[0] != "node") {
    throw std::runtime_error("feature file lacks a 'node' column: " + path);
  }
  for (std::size_t c = 1; c < header.size(); ++c) {
    out.names.emplace_back(header[c]);
  }
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("ragged row " + std::to_string(rows) + " in " +
                               path);
    }
    if (parse_double(fields[0], path) != static_cast<double>(rows)) {
      throw std::runtime_error("feature rows out of order in " + path);
    }
    for (std::size_t c = 1; c < fields.size(); ++c) {
      values.push_back(parse_double(fields[c], path));
    }
    ++rows;
  }
  out.values = Tensor2(rows, out.names.size(), std::move(values));
  return out;
}

void write_emb1(const std::string& path, const Tensor2& embeddings) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write embeddings " + path);
  io::write_magic(out, "EMB1");
  io::write_u32(out, static_cast<std::uint32_t>(embeddings.rows()));
  io::write_u32(out, static_cast<std::uint32_t>(embeddings.cols()));
  for (const double v : embeddings.values()) {
    io::write_f32(out, static_cast<float>(v));
  }
  if (!out) throw std::runtime_error("failed writing embeddings " + path);
}

Tensor2 read_emb1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read embeddings " + path);
  io::expect_magic(in, "EMB1", path);
  const std::uint32_t rows = io::read_u32(in, "row count");
  const std::uint32_t dim = io::read_u32(in, "dim");
  if (dim == 0) throw std::runtime_error("EMB1 dim is 0 in " + path);
  Tensor2 out(rows, dim);
  for (auto& v : out.values()) {
    const float f = io::read_f32(in, "embedding value");
    if (!std::isfinite(f)) {
      throw std::runtime_error("non-finite embedding value in " + path);
    }
    v = f;
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error("trailing bytes after EMB1 payload in " + path);
  }
  return out;
}

Tensor2 load_embeddings(const std::string& path, std::size_t expected_rows) {
  Tensor2 out = read_emb1(path);
  if (out.rows() != expected_rows) {
    throw std::runtime_error("row count mismatch in " + path + ": expected " +
                             std::to_string(expected_rows) + ", found " +
                             std::to_string(out.rows()));
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (const char ch : text) {
    const auto uc = static_cast<unsigned char>(ch);
    if (uc >= 0x80 || std::isalnum(uc)) {
      current.push_back(static_cast<char>(std::tolower(uc)));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

HashedToken hash_token(std::string_view token, std::size_t dim,
                       std::uint64_t seed) {
  const std::uint64_t h = hash64(token, seed);
  return {static_cast<std::size_t>(h % dim), ((h >> 63) & 1u) ? -1.0 : 1.0};
}

Tensor2 fallback_embed(const std::vector<std::string>& texts, std::size_t dim,
                       std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("fallback_embed: dim must be >= 1");
  Tensor2 out(texts.size(), dim);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    auto row = out.row(i);
    for (const auto& token : tokenize(texts[i])) {
      const auto ht = hash_token(token, dim, seed);
      row[ht.bucket] += ht.sign;
    }
    double norm = 0.0;
    for (const double v : row) norm += v * v;
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (auto& v : row) v /= norm;
    }
  }
  return out;
}

Tensor2 Standardizer::apply(const Tensor2& x) const {
  if (x.cols() != means.size()) {
    throw std::invalid_argument("Standardizer: column count mismatch");
  }
  Tensor2 out = x;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c] -= means[c];
      if (stds[c] > 0.0) row[c] /= stds[c];
    }
  }
  return out;
}

Tensor2 Standardizer::invert(const Tensor2& z) const {
  if (z.cols() != means.size()) {
    throw std::invalid_argument("Standardizer: column count mismatch");
  }
  Tensor2 out = z;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (stds[c] > 0.0) row[c] *= stds[c];
      row[c] += means[c];
    }
  }
  return out;
}

Standardizer fit_standardizer(const Tensor2& x,
                              std::span<const std::size_t> rows) {
  if (rows.empty()) {
    throw std::invalid_argument("standardize: empty row subset");
  }
  const std::size_t d = x.cols();
  Standardizer s;
  s.means.assign(d, 0.0);
  s.stds.assign(d, 0.0);
  for (const std::size_t r : rows) {
    if (r >= x.rows()) throw std::out_of_range("standardize: row index");
    const auto row = x.row(r);
    for (std::size_t c = 0; c < d; ++c) s.means[c] += row[c];
  }
  const double m = static_cast<double>(rows.size());
  for (auto& v : s.means) v /= m;
  for (const std::size_t r : rows) {
    const auto row = x.row(r);
    for (std::size_t c = 0; c < d; ++c) {
      const double dv = row[c] - s.means[c];
      s.stds[c] += dv * dv;
    }
  }
  for (auto& v : s.stds) v = std::sqrt(v / m);
  return s;
}

std::pair<Tensor2, Standardizer> standardize(
    const Tensor2& x, std::span<const std::size_t> rows) {
  Standardizer s = fit_standardizer(x, rows);
  Tensor2 z = s.apply(x);
  return {std::move(z), std::move(s)};
}

Tensor2 PcaModel::transform(const Tensor2& x) const {
  if (x.cols() != mean.size()) {
    throw std::invalid_argument("PCA transform: column count mismatch");
  }
  Tensor2 centered = x;
  for (std::size_t i = 0; i < centered.rows(); ++i) {
    auto row = centered.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] -= mean[c];
  }
  return nn::matmul(centered, components);
}

Tensor2 PcaModel::reconstruct(const Tensor2& reduced) const {
  Tensor2 out = nn::matmul(reduced, nn::transpose(components));
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto row = out.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += mean[c];
  }
  return out;
}

PcaModel pca_fit(const Tensor2& x, std::size_t k,
                 std::span<const std::size_t> rows) {
  const std::size_t d = x.cols();
  if (k == 0 || k > d) {
    throw std::invalid_argument("pca: k must be in [1, " + std::to_string(d) +
                                "], got " + std::to_string(k));
  }
  if (rows.size() < 2) throw std::invalid_argument("pca: need at least 2 rows");

  using RowMatrix =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMatrix sub(rows.size(), d);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= x.rows()) throw std::out_of_range("pca: row index");
    const auto src = x.row(rows[i]);
    for (std::size_t c = 0; c < d; ++c) sub(i, c) = src[c];
  }
  const Eigen::RowVectorXd mu = sub.colwise().mean();
  sub.rowwise() -= mu;
  const Eigen::MatrixXd cov =
      (sub.transpose() * sub) / static_cast<double>(rows.size() - 1);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("pca: eigendecomposition failed");
  }
  // Eigen returns ascending eigenvalues.
  const Eigen::VectorXd& evals = solver.eigenvalues();
  const Eigen::MatrixXd& evecs = solver.eigenvectors();
  double total = 0.0;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    total += std::max(evals(i), 0.0);
  }

  PcaModel model;
  model.mean.assign(mu.data(), mu.data() + d);
  model.components = Tensor2(d, k);
  for (std::size_t j = 0; j < k; ++j) {
    const Eigen::Index src = static_cast<Eigen::Index>(d - 1 - j);
    Eigen::Index arg = 0;
    evecs.col(src).cwiseAbs().maxCoeff(&arg);
    const double sign = evecs(arg, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < d; ++c) {
      model.components(c, j) = sign * evecs(static_cast<Eigen::Index>(c), src);
    }
    const double ev = std::max(evals(src), 0.0);
    model.explained_variance.push_back(ev);
    model.explained_ratio.push_back(total > 0.0 ? ev / total : 0.0);
  }
  return model;
}

std::pair<PcaModel, Tensor2> pca_fit_transform(
    const Tensor2& x, std::size_t k, std::span<const std::size_t> rows) {
  PcaModel model = pca_fit(x, k, rows);
  Tensor2 reduced = model.transform(x);
  return {std::move(model), std::move(reduced)};
}

Tensor2 concat_features(const Tensor2& phi, const Tensor2& emb, bool use_phi,
                        bool use_emb) {
  if (phi.rows() != emb.rows()) {
    throw std::invalid_argument("concat_features: row mismatch (" +
                                std::to_string(phi.rows()) + " vs " +
                                std::to_string(emb.rows()) + ")");
  }
  if (use_phi && use_emb) return nn::hconcat(phi, emb);
  if (use_phi) return phi;
  if (use_emb) return emb;
  return Tensor2(phi.rows(), 1, 1.0);
}

const std::vector<FeatureSet>& all_feature_sets() {
  static const std::vector<FeatureSet> sets = {
      FeatureSet::kNone,     FeatureSet::kPhi,       FeatureSet::kEmb,
      FeatureSet::kEmbPca,   FeatureSet::kJointPca,  FeatureSet::kPhiEmbPca,
      FeatureSet::kFull};
  return sets;
}

std::string_view feature_set_name(FeatureSet set) {
  switch (set) {
    case FeatureSet::kNone: return "none";
    case FeatureSet::kPhi: return "phi";
    case FeatureSet::kEmb: return "emb";
    case FeatureSet::kEmbPca: return "emb-pca";
    case FeatureSet::kJointPca: return "phi-pca+emb-pca";
    case FeatureSet::kPhiEmbPca: return "phi+emb-pca";
    case FeatureSet::kFull: return "phi+emb";
  }
  throw std::logic_error("unknown feature set");
}

FeatureSet parse_feature_set(std::string_view name) {
  for (const auto set : all_feature_sets()) {
    if (feature_set_name(set) == name) return set;
  }
  throw std::invalid_argument("unknown feature set '" + std::string(name) +
                              "'");
}

bool uses_phi(FeatureSet set) {
  return set == FeatureSet::kPhi || set == FeatureSet::kJointPca ||
         set == FeatureSet::kPhiEmbPca || set == FeatureSet::kFull;
}

bool uses_emb(FeatureSet set) {
  return set != FeatureSet::kNone && set != FeatureSet::kPhi;
}

Tensor2 make_feature_set(const Tensor2& phi, const Tensor2& emb, FeatureSet set,
                         std::span<const std::size_t> train_rows,
                         const FeatureOptions& options) {
  if (set == FeatureSet::kNone) {
    return concat_features(phi, emb, false, false);
  }
  const Tensor2 phi_in = options.standardize ? zscore(phi, train_rows) : phi;
  const std::size_t k_emb = std::min(options.pca_components, emb.cols());
  Tensor2 x;
  switch (set) {
    case FeatureSet::kPhi:
      x = phi_in;
      break;
    case FeatureSet::kEmb:
      x = emb;
      break;
    case FeatureSet::kEmbPca:
      x = pca_fit_transform(emb, k_emb, train_rows).second;
      break;
    case FeatureSet::kJointPca: {
      const Tensor2 joint = concat_features(phi_in, emb, true, true);
      const std::size_t k = std::min(options.pca_components, joint.cols());
      x = pca_fit_transform(joint, k, train_rows).second;
      break;
    }
    case FeatureSet::kPhiEmbPca:
      x = concat_features(phi_in,
                          pca_fit_transform(emb, k_emb, train_rows).second,
                          true, true);
      break;
    case FeatureSet::kFull:
      x = concat_features(phi_in, emb, true, true);
      break;
    case FeatureSet::kNone:
      break;
  }
  return x;
}

}  // namespace engage::features
