// Copyright 2026 The Frameparse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "frameparse/layers.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "frameparse/errors.h"

namespace frameparse {
namespace {

double Sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

TEST(Linear, MatchesLoops) {
  ParameterSet ps;
  std::mt19937_64 rng(1);
  const Linear l = MakeLinear(&ps, "l", 3, 2, true, &rng);
  l.bias.impl()->value = {0.5, -0.25};
  const ad::Tensor x = ad::Tensor::FromValues(2, 3, {1, 2, 3, -1, 0, 4});
  const ad::Tensor y = l.Forward(x);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      double want = l.bias.at(0, c);
      for (int k = 0; k < 3; ++k) want += x.at(r, k) * l.weight.at(k, c);
      EXPECT_NEAR(y.at(r, c), want, 1e-12);
    }
  }
  ASSERT_NE(ps.Find("l.weight"), nullptr);
  EXPECT_TRUE(ps.Find("l.weight")->decay);
  EXPECT_FALSE(ps.Find("l.bias")->decay);
  EXPECT_EQ(ps.TotalSize(), 8u);
}

TEST(LabelBilinear, MatchesNaiveLoops) {
  ParameterSet ps;
  std::mt19937_64 rng(2);
  const LabelBilinear bl = MakeLabelBilinear(&ps, "u", 3, 4, 5, &rng);
  std::normal_distribution<double> d;
  std::vector<double> lv(4), rv(2 * 5);
  for (double& v : lv) v = d(rng);
  for (double& v : rv) v = d(rng);
  const ad::Tensor left = ad::Tensor::FromValues(1, 4, lv);
  const ad::Tensor rights = ad::Tensor::FromValues(2, 5, rv);
  const ad::Tensor scores = bl.ScoreRows(left, rights);
  ASSERT_EQ(scores.rows(), 2);
  ASSERT_EQ(scores.cols(), 3);
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 3; ++k) {
      double want = 0;
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 5; ++b) want += lv[a] * bl.forms[k].at(a, b) * rv[i * 5 + b];
      }
      EXPECT_NEAR(scores.at(i, k), want, 1e-10);
    }
  }
  const ad::Tensor one = bl.Score(left, ad::SliceRows(rights, 1, 1));
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(one.at(0, k), scores.at(1, k), 1e-12);
}

TEST(LabelBilinear, GradientsCheck) {
  ParameterSet ps;
  std::mt19937_64 rng(3);
  const LabelBilinear bl = MakeLabelBilinear(&ps, "u", 2, 3, 3, &rng);
  ad::Tensor left = ad::Tensor::FromValues(1, 3, {0.3, -0.2, 0.9}, true);
  ad::Tensor rights = ad::Tensor::FromValues(2, 3, {0.1, 0.4, -0.5, 0.7, -0.1, 0.2}, true);
  const auto report = ad::GradCheck(
      [&] { return ad::Sum(ad::Tanh(bl.ScoreRows(left, rights))); },
      {{"left", left}, {"rights", rights}, {"u0", bl.forms[0]}, {"u1", bl.forms[1]}});
  EXPECT_TRUE(report.passed) << report.max_rel_error;
}

// Reference LSTM written directly from the gate equations.
std::vector<std::vector<double>> NaiveLstm(const LstmCell& c,
                                           const std::vector<std::vector<double>>& x,
                                           bool reverse) {
  const int h = c.hidden();
  const int in = c.input_weight.rows();
  const int n = static_cast<int>(x.size());
  std::vector<double> state(h, 0.0), cell(h, 0.0);
  std::vector<std::vector<double>> out(n);
  for (int s = 0; s < n; ++s) {
    const int t = reverse ? n - 1 - s : s;
    std::vector<double> g(4 * h);
    for (int j = 0; j < 4 * h; ++j) {
      g[j] = c.bias.at(0, j);
      for (int k = 0; k < in; ++k) g[j] += x[t][k] * c.input_weight.at(k, j);
      for (int k = 0; k < h; ++k) g[j] += state[k] * c.recurrent_weight.at(k, j);
    }
    for (int j = 0; j < h; ++j) {
      const double i = Sig(g[j]), f = Sig(g[h + j]), cand = std::tanh(g[2 * h + j]);
      const double o = Sig(g[3 * h + j]);
      cell[j] = f * cell[j] + i * cand;
      state[j] = o * std::tanh(cell[j]);
    }
    out[t] = state;
  }
  return out;
}

TEST(BiLstm, MatchesNaiveRecurrence) {
  ParameterSet ps;
  std::mt19937_64 rng(4);
  const BiLstm lstm = MakeBiLstm(&ps, "lstm", 3, 2, 1, &rng);
  const std::vector<std::vector<double>> x = {{0.1, -0.4, 0.3}, {0.8, 0.2, -0.6}, {-0.3, 0.5, 0.1}};
  std::vector<double> flat;
  for (const auto& row : x) flat.insert(flat.end(), row.begin(), row.end());
  const ad::Tensor y = lstm.Forward(ad::Tensor::FromValues(3, 3, flat));
  const auto fwd = NaiveLstm(lstm.forward[0], x, false);
  const auto bwd = NaiveLstm(lstm.backward[0], x, true);
  ASSERT_EQ(y.cols(), 4);
  for (int t = 0; t < 3; ++t) {
    for (int j = 0; j < 2; ++j) {
      EXPECT_NEAR(y.at(t, j), fwd[t][j], 1e-12);
      EXPECT_NEAR(y.at(t, 2 + j), bwd[t][j], 1e-12);
    }
  }
}

TEST(BiLstm, StackedGradientsCheck) {
  ParameterSet ps;
  std::mt19937_64 rng(5);
  const BiLstm lstm = MakeBiLstm(&ps, "lstm", 2, 2, 2, &rng);
  ad::Tensor x = ad::Tensor::FromValues(3, 2, {0.2, -0.1, 0.5, 0.3, -0.4, 0.6}, true);
  std::vector<ad::NamedTensor> params = {{"x", x}};
  for (const Parameter& p : ps.params()) params.push_back({p.name, p.tensor});
  const auto report = ad::GradCheck(
      [&] { return ad::Sum(ad::Mul(lstm.Forward(x), lstm.Forward(x))); }, params);
  EXPECT_TRUE(report.passed) << report.max_rel_error;
}

TEST(Embedding, LookupAndBadIds) {
  ParameterSet ps;
  std::mt19937_64 rng(6);
  EmbeddingTable t{ps.Embedding("emb", 4, 3, &rng)};
  const ad::Tensor rows = t.Lookup({2, 0, 2});
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(rows.at(0, c), t.table.at(2, c));
    EXPECT_EQ(rows.at(2, c), t.table.at(2, c));
  }
  EXPECT_THROW(t.Lookup({4}), NumericError);
  EXPECT_FALSE(ps.Find("emb")->decay);
}

TEST(LoadTextVectors, ReplacesKnownRows) {
  ParameterSet ps;
  std::mt19937_64 rng(7);
  EmbeddingTable t{ps.Embedding("emb", 3, 2, &rng)};
  Vocabulary v = Vocabulary::WithUnknown();
  v.Add("cat");
  v.Add("dog");
  const std::string path = ::testing::TempDir() + "vectors.txt";
  {
    std::ofstream out(path);
    out << "cat 1 2\nbird 3 4\n";
  }
  EXPECT_EQ(LoadTextVectors(path, v, &t), 1);
  EXPECT_EQ(t.table.at(1, 0), 1.0);
  EXPECT_EQ(t.table.at(1, 1), 2.0);
  {
    std::ofstream out(path);
    out << "cat 1 2 3\n";
  }
  EXPECT_THROW(LoadTextVectors(path, v, &t), DataError);
  std::remove(path.c_str());
}

}  // namespace
}  // namespace frameparse
