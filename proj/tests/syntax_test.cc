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

#include "frameparse/syntax.h"

#include <random>

#include <gtest/gtest.h>

#include "frameparse/errors.h"
#include "oracles.h"
#include "test_util.h"

namespace frameparse {
namespace {

constexpr char kRachel[] =
    "(S (NP (NNP Rachel)) (VP (VBD had) (NP (JJ little) (NN time))))";

TEST(ParseBracketed, AssignsPreOrderIds) {
  const ConstTree t = ParseBracketed(kRachel);
  ASSERT_EQ(t.size(), 8);
  const std::vector<std::string> labels = {"S", "NP", "NNP", "VP", "VBD", "NP", "JJ", "NN"};
  for (int i = 0; i < t.size(); ++i) {
    EXPECT_EQ(t.node(i).label, labels[i]);
    if (t.node(i).parent) {
      EXPECT_LT(*t.node(i).parent, i);
    }
  }
  EXPECT_EQ(t.words(), (std::vector<std::string>{"Rachel", "had", "little", "time"}));
  EXPECT_EQ(t.pos_tags(), (std::vector<std::string>{"NNP", "VBD", "JJ", "NN"}));
  EXPECT_EQ(t.preterminal_order(), (std::vector<int>{2, 4, 6, 7}));
  EXPECT_EQ(t.height(), 3);
  EXPECT_EQ(t.token_span(3), std::make_pair(1, 3));
  EXPECT_EQ(t.token_span(5), std::make_pair(2, 3));
}

TEST(ParseBracketed, UnwrapsNamelessRootAndToleratesWhitespace) {
  const ConstTree t = ParseBracketed("( (S\n  (NP (PRP I))\t(VP (VBD ran))) )");
  EXPECT_EQ(t.node(0).label, "S");
  EXPECT_EQ(t.num_tokens(), 2);
}

TEST(ParseBracketed, RejectsMalformedInput) {
  EXPECT_THROW(ParseBracketed(""), DataError);
  EXPECT_THROW(ParseBracketed("(S (NP (PRP I))"), DataError);
  EXPECT_THROW(ParseBracketed("(S (NP (PRP I))))"), DataError);
  EXPECT_THROW(ParseBracketed("(S (NP))"), DataError);
}

TEST(Serialize, RoundTrips) {
  const ConstTree t = ParseBracketed(kRachel);
  EXPECT_EQ(Serialize(t), kRachel);
  EXPECT_EQ(Serialize(ParseBracketed(Serialize(t))), kRachel);
}

TEST(Adjacency, HasSelfLoopsAndChildToFatherEdges) {
  const ConstTree t = ParseBracketed(kRachel);
  const Adjacency a = BuildAdjacency(t);
  for (int i = 0; i < t.size(); ++i) {
    for (int j = 0; j < t.size(); ++j) {
      const bool child = t.node(j).parent && *t.node(j).parent == i;
      EXPECT_EQ(a.at(i, j), child || i == j) << i << "," << j;
    }
  }
  // N self-loops plus N-1 edges.
  EXPECT_EQ(a.count(), 2 * t.size() - 1);
  EXPECT_EQ(a.row_count(0), 3);
}

TEST(TreePath, HadToLittle) {
  const ConstTree t = ParseBracketed(kRachel);
  const std::vector<int> path = TreePath(t, TokenNode(t, 1), TokenNode(t, 2));
  std::vector<std::string> labels;
  for (int id : path) labels.push_back(t.node(id).label);
  EXPECT_EQ(labels, (std::vector<std::string>{"VBD", "VP", "NP", "JJ"}));
  EXPECT_EQ(TreePath(t, 3, 3), std::vector<int>{3});
  EXPECT_THROW(TokenNode(t, 4), DataError);
}

TEST(TreePath, MatchesBreadthFirstSearch) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const ConstTree t = testing::RandomTree(1 + static_cast<int>(rng() % 25), &rng);
    for (int i = 0; i < t.size(); ++i) {
      for (int j = 0; j < t.size(); ++j) EXPECT_EQ(TreePath(t, i, j), testing::BfsPath(t, i, j));
    }
  }
}

TEST(BuildTree, RejectsInconsistentLinks) {
  std::vector<Node> nodes(2);
  nodes[0].id = 0;
  nodes[0].label = "S";
  nodes[0].children = {1};
  nodes[1].id = 1;
  nodes[1].label = "NN";
  nodes[1].word = "x";
  nodes[1].parent = 0;
  EXPECT_NO_THROW(BuildTree(nodes));
  nodes[1].parent = std::nullopt;
  EXPECT_THROW(BuildTree(nodes), DataError);
}

}  // namespace
}  // namespace frameparse
