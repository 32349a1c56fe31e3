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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "oracles.hpp"

namespace engage::features {
namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("engage_feat_" + name)).string();
}

std::vector<std::size_t> iota_rows(std::size_t n) {
  std::vector<std::size_t> r(n);
  std::iota(r.begin(), r.end(), std::size_t{0});
  return r;
}

Tensor2 random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  Tensor2 m(r, c);
  for (double& v : m.values()) v = rng.normal();
  return m;
}

TEST(AssemblePhi, ColumnOrderAndValues) {
  ingest::TweetRecord r;
  r.followers = 10;
  r.n_tweets = 5;
  r.following = 3;
  r.length_of_post = 20;
  r.n_hashtags = 2;
  r.n_mentions = 1;
  r.emojis = 0;
  r.official_source = true;
  r.has_media = false;
  const FeatureMatrix phi = assemble_phi({r, ingest::TweetRecord{}});
  ASSERT_EQ(phi.values.rows(), 2u);
  ASSERT_EQ(phi.values.cols(), 9u);
  const std::vector<double> row0(phi.values.row(0).begin(), phi.values.row(0).end());
  EXPECT_EQ(row0, (std::vector<double>{10, 5, 3, 20, 2, 1, 0, 1, 0}));
  for (double v : phi.values.row(1)) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(phi.names, phi_names());
  EXPECT_EQ(phi.names.front(), "followers");
  EXPECT_EQ(phi.names.back(), "has_media");
}

TEST(PhiCsv, RoundTripIsExact) {
  Rng rng(1);
  FeatureMatrix phi{random_matrix(rng, 7, 9), phi_names()};
  phi.values(0, 0) = 1e300;
  phi.values(1, 1) = -0.1;
  const std::string path = temp_path("phi.csv");
  write_phi_csv(path, phi);
  const FeatureMatrix back = read_phi_csv(path);
  EXPECT_EQ(back.values, phi.values);
  EXPECT_EQ(back.names, phi.names);
  std::filesystem::remove(path);
}

TEST(Emb1, RoundTripAndLayout) {
  Tensor2 e(3, 4);
  for (std::size_t i = 0; i < e.size(); ++i) e.values()[i] = static_cast<float>(0.1 * i - 0.5);
  const std::string path = temp_path("a.emb1");
  write_emb1(path, e);
  const Tensor2 back = load_embeddings(path, 3);
  EXPECT_EQ(back.rows(), 3u);
  EXPECT_EQ(back.cols(), 4u);
  EXPECT_EQ(back, e);
  std::ifstream in(path, std::ios::binary);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), {});
  ASSERT_EQ(bytes.size(), 12u + 4u * 12u);
  EXPECT_EQ(std::string(bytes.data(), 4), "EMB1");
  EXPECT_EQ(bytes[4], 3);
  EXPECT_EQ(bytes[8], 4);
  float first = 0.0f;
  std::memcpy(&first, bytes.data() + 12, 4);
  EXPECT_EQ(first, -0.5f);
  std::filesystem::remove(path);
}

TEST(Emb1, RowCountMismatchNamesBothCounts) {
  const std::string path = temp_path("b.emb1");
  write_emb1(path, Tensor2(3, 2, 0.25));
  try {
    load_embeddings(path, 5);
    FAIL();
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row count mismatch"), std::string::npos);
    EXPECT_NE(msg.find("expected 5"), std::string::npos);
    EXPECT_NE(msg.find("found 3"), std::string::npos);
  }
  std::filesystem::remove(path);
}

TEST(Emb1, BadMagicAndTruncation) {
  const std::string path = temp_path("c.emb1");
  {
    std::ofstream out(path, std::ios::binary);
    out << "EMB2xxxxxxxx";
  }
  EXPECT_THROW(read_emb1(path), std::runtime_error);
  write_emb1(path, Tensor2(2, 2, 1.0));
  std::filesystem::resize_file(path, 18);
  EXPECT_THROW(read_emb1(path), std::runtime_error);
  std::filesystem::remove(path);
}

TEST(Tokenize, LowercasedAlnumRuns) {
  EXPECT_EQ(tokenize("Hello, World! x2 #Tag caf\xc3\xa9"),
            (std::vector<std::string>{"hello", "world", "x2", "tag", "caf\xc3\xa9"}));
  EXPECT_TRUE(tokenize(" ,.!").empty());
}

TEST(FallbackEmbed, DeterministicUnitRowsAndZeroForEmpty) {
  const std::vector<std::string> texts = {"the cat sat", "the cat sat", "", "!!!"};
  const Tensor2 a = fallback_embed(texts, 32, 9);
  EXPECT_EQ(a, fallback_embed(texts, 32, 9));
  for (std::size_t c = 0; c < 32; ++c) {
    EXPECT_EQ(a(0, c), a(1, c));
    EXPECT_EQ(a(2, c), 0.0);
    EXPECT_EQ(a(3, c), 0.0);
  }
  double norm = 0.0;
  for (double v : a.row(0)) norm += v * v;
  EXPECT_NEAR(norm, 1.0, 1e-15);
  EXPECT_THROW(fallback_embed(texts, 0, 1), std::invalid_argument);
}

TEST(FallbackEmbed, DotProductEqualsBucketCollisionSum) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> wa;
    std::vector<std::string> wb;
    for (int k = 0; k < 3; ++k) {
      wa.push_back("a" + std::to_string(trial) + "x" + std::to_string(k));
      wb.push_back("b" + std::to_string(trial) + "x" + std::to_string(k));
    }
    const std::size_t dim = 4 + rng.index(8);
    const std::uint64_t seed = rng.next();
    const Tensor2 e = fallback_embed({wa[0] + " " + wa[1] + " " + wa[2],
                                      wb[0] + " " + wb[1] + " " + wb[2]},
                                     dim, seed);
    // Buckets and signs straight from the seeded hash.
    auto spread = [&](const std::vector<std::string>& words) {
      std::vector<double> v(dim, 0.0);
      for (const auto& w : words) {
        const std::uint64_t h = hash64(w, seed);
        v[h % dim] += (h >> 63) ? -1.0 : 1.0;
      }
      return v;
    };
    const auto va = spread(wa);
    const auto vb = spread(wb);
    double collide = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      collide += va[c] * vb[c];
      na += va[c] * va[c];
      nb += vb[c] * vb[c];
    }
    double dot = 0.0;
    for (std::size_t c = 0; c < dim; ++c) dot += e(0, c) * e(1, c);
    const double expected = (na > 0 && nb > 0) ? collide / std::sqrt(na * nb) : 0.0;
    EXPECT_NEAR(dot, expected, 1e-14);
  }
}

TEST(Standardize, BasicCases) {
  Tensor2 x = {{0, 7}, {2, 7}};
  const auto [z, s] = standardize(x, iota_rows(2));
  EXPECT_EQ(z(0, 0), -1.0);
  EXPECT_EQ(z(1, 0), 1.0);
  EXPECT_EQ(z(0, 1), 0.0);
  EXPECT_EQ(s.stds[1], 0.0);
  EXPECT_THROW(fit_standardizer(x, {}), std::invalid_argument);
}

TEST(Standardize, UsesOnlyTheGivenRows) {
  Tensor2 x = {{0}, {2}, {100}, {-50}};
  const std::vector<std::size_t> train = {0, 1};
  const auto [z, s] = standardize(x, train);
  EXPECT_EQ(s.means[0], 1.0);
  EXPECT_EQ(s.stds[0], 1.0);
  EXPECT_EQ(z(2, 0), 99.0);
  EXPECT_EQ(z(3, 0), -51.0);
}

TEST(Standardize, InvertRecoversInput) {
  Rng rng(6);
  Tensor2 x = random_matrix(rng, 40, 5);
  for (std::size_t i = 0; i < 40; ++i) x(i, 2) = 3.0;
  const auto [z, s] = standardize(x, iota_rows(20));
  EXPECT_LT(nn::max_abs_diff(s.invert(z), x), 1e-10);
}

TEST(Pca, CollinearPointsHaveOneComponent) {
  Tensor2 x(10, 2);
  for (std::size_t i = 0; i < 10; ++i) {
    x(i, 0) = static_cast<double>(i);
    x(i, 1) = 2.0 * static_cast<double>(i) + 1.0;
  }
  const PcaModel m = pca_fit(x, 1, iota_rows(10));
  EXPECT_NEAR(m.explained_ratio[0], 1.0, 1e-12);
}

TEST(Pca, FullRankReconstructs) {
  Rng rng(8);
  const Tensor2 x = random_matrix(rng, 30, 6);
  const auto [m, reduced] = pca_fit_transform(x, 6, iota_rows(30));
  EXPECT_LT(nn::max_abs_diff(m.reconstruct(reduced), x), 1e-8);
}

TEST(Pca, MatchesJacobiOracle) {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    Tensor2 x = random_matrix(rng, 200, 20);
    for (std::size_t i = 0; i < 200; ++i) {
      x(i, 1) += 2.0 * x(i, 0);
      x(i, 5) *= 3.0;
    }
    const auto rows = iota_rows(150);
    const PcaModel m = pca_fit(x, 5, rows);
    const oracle::Eigensystem ref = oracle::jacobi(oracle::covariance(x, rows));
    double total = 0.0;
    for (double v : ref.values) total += v;
    for (std::size_t k = 0; k < 5; ++k) {
      EXPECT_NEAR(m.explained_variance[k], ref.values[k], 1e-8);
      EXPECT_NEAR(m.explained_ratio[k], ref.values[k] / total, 1e-10);
      double dot = 0.0;
      for (std::size_t d = 0; d < 20; ++d) dot += m.components(d, k) * ref.vectors[k][d];
      EXPECT_NEAR(std::abs(dot), 1.0, 1e-8);
    }
  }
}

TEST(Pca, OrthonormalSortedAndSigned) {
  Rng rng(14);
  const Tensor2 x = random_matrix(rng, 100, 12);
  const PcaModel m = pca_fit(x, 8, iota_rows(100));
  double ratio_sum = 0.0;
  for (std::size_t a = 0; a < 8; ++a) {
    ratio_sum += m.explained_ratio[a];
    if (a > 0) {
      EXPECT_LE(m.explained_ratio[a], m.explained_ratio[a - 1]);
    }
    double largest = 0.0;
    for (std::size_t d = 0; d < 12; ++d) {
      if (std::abs(m.components(d, a)) > std::abs(largest)) largest = m.components(d, a);
    }
    EXPECT_GT(largest, 0.0);
    for (std::size_t b = 0; b < 8; ++b) {
      double dot = 0.0;
      for (std::size_t d = 0; d < 12; ++d) dot += m.components(d, a) * m.components(d, b);
      EXPECT_NEAR(dot, a == b ? 1.0 : 0.0, 1e-8);
    }
  }
  EXPECT_LE(ratio_sum, 1.0 + 1e-12);
}

TEST(Pca, RejectsBadArguments) {
  const Tensor2 x(5, 3, 1.0);
  EXPECT_THROW(pca_fit(x, 0, iota_rows(5)), std::invalid_argument);
  EXPECT_THROW(pca_fit(x, 4, iota_rows(5)), std::invalid_argument);
  EXPECT_THROW(pca_fit(x, 1, iota_rows(1)), std::invalid_argument);
}

TEST(ConcatFeatures, Shapes) {
  const Tensor2 phi(2, 9, 1.0);
  const Tensor2 emb(2, 4, 2.0);
  EXPECT_EQ(concat_features(phi, emb, true, true).cols(), 13u);
  EXPECT_EQ(concat_features(phi, emb, false, true), emb);
  const Tensor2 ones = concat_features(phi, emb, false, false);
  EXPECT_EQ(ones, Tensor2(2, 1, 1.0));
  EXPECT_THROW(concat_features(phi, Tensor2(3, 4), true, true), std::invalid_argument);
}

TEST(FeatureSets, NamesRoundTrip) {
  EXPECT_EQ(all_feature_sets().size(), 7u);
  for (const FeatureSet s : all_feature_sets()) {
    EXPECT_EQ(parse_feature_set(feature_set_name(s)), s);
  }
  EXPECT_EQ(feature_set_name(FeatureSet::kFull), "phi+emb");
  EXPECT_THROW(parse_feature_set("bogus"), std::invalid_argument);
  EXPECT_TRUE(uses_phi(FeatureSet::kJointPca));
  EXPECT_FALSE(uses_emb(FeatureSet::kPhi));
}

TEST(MakeFeatureSet, ShapesPerRow) {
  Rng rng(16);
  const Tensor2 phi = random_matrix(rng, 60, 9);
  const Tensor2 emb = random_matrix(rng, 60, 20);
  const auto train = iota_rows(40);
  FeatureOptions opt;
  opt.pca_components = 6;
  EXPECT_EQ(make_feature_set(phi, emb, FeatureSet::kNone, train, opt), Tensor2(60, 1, 1.0));
  EXPECT_EQ(make_feature_set(phi, emb, FeatureSet::kPhi, train, opt).cols(), 9u);
  EXPECT_EQ(make_feature_set(phi, emb, FeatureSet::kEmb, train, opt), emb);
  EXPECT_EQ(make_feature_set(phi, emb, FeatureSet::kEmbPca, train, opt).cols(), 6u);
  EXPECT_EQ(make_feature_set(phi, emb, FeatureSet::kJointPca, train, opt).cols(), 6u);
  EXPECT_EQ(make_feature_set(phi, emb, FeatureSet::kPhiEmbPca, train, opt).cols(), 15u);
  EXPECT_EQ(make_feature_set(phi, emb, FeatureSet::kFull, train, opt).cols(), 29u);
}

TEST(MakeFeatureSet, PhiBlockIsZScoredOnTrainRows) {
  Rng rng(18);
  Tensor2 phi = random_matrix(rng, 50, 9);
  for (double& v : phi.values()) v = 100.0 + 30.0 * v;
  const Tensor2 emb = random_matrix(rng, 50, 4);
  const auto train = iota_rows(30);
  const Tensor2 x = make_feature_set(phi, emb, FeatureSet::kFull, train, FeatureOptions{});
  EXPECT_LT(nn::max_abs_diff(nn::gather_rows(x, train),
                             nn::gather_rows(nn::hconcat(standardize(phi, train).first, emb), train)),
            1e-12);
  FeatureOptions raw;
  raw.standardize = false;
  EXPECT_EQ(make_feature_set(phi, emb, FeatureSet::kFull, train, raw), nn::hconcat(phi, emb));
}

}  // namespace
}  // namespace engage::features
