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

#include "frameparse/evaluation.h"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "frameparse/errors.h"

namespace frameparse {
namespace {

TEST(SpanPrf, HandCounts) {
  const Prf same = SpanPrf({{{1}, {2, 4}}}, {{{2, 4}, {1}}});
  EXPECT_DOUBLE_EQ(same.f1, 1.0);
  const Prf none = SpanPrf({{{1}}}, {{}});
  EXPECT_DOUBLE_EQ(none.precision, 0.0);
  EXPECT_DOUBLE_EQ(none.recall, 0.0);
  EXPECT_DOUBLE_EQ(none.f1, 0.0);
  const Prf half = SpanPrf({{{1}, {3}}}, {{{1}, {2}}});
  EXPECT_DOUBLE_EQ(half.precision, 0.5);
  EXPECT_DOUBLE_EQ(half.recall, 0.5);
  EXPECT_DOUBLE_EQ(half.f1, 0.5);
  // Index sets must match exactly.
  EXPECT_EQ(SpanPrf({{{2, 4}}}, {{{2}}}).matched, 0);
  const Prf empty = SpanPrf({{}, {}}, {{}, {}});
  EXPECT_DOUBLE_EQ(empty.f1, 1.0);
  EXPECT_THROW(SpanPrf({{}}, {}), Error);
}

TEST(FiAccuracy, Counts) {
  EXPECT_DOUBLE_EQ(FiAccuracy({"A", "B"}, {"A", "B"}).accuracy, 1.0);
  EXPECT_DOUBLE_EQ(FiAccuracy({"A", "B"}, {"B", "A"}).accuracy, 0.0);
  std::vector<std::string> gold(10, "A"), pred(10, "A");
  pred[3] = "B";
  const Accuracy a = FiAccuracy(gold, pred);
  EXPECT_DOUBLE_EQ(a.accuracy, 0.9);
  EXPECT_EQ(a.correct, 9);
  EXPECT_THROW(FiAccuracy({"A"}, {}), Error);
}

TEST(SrlPrf, ExactMatchRule) {
  const std::vector<ElementSpan> g = {{{0, 0}, "Agent"}, {{2, 3}, "Item"}};
  EXPECT_DOUBLE_EQ(SrlPrf({g}, {g}).f1, 1.0);
  // Right span, wrong label: a miss and a false positive.
  const Prf wrong = SrlPrf({{{{0, 0}, "Agent"}}}, {{{{0, 0}, "Item"}}});
  EXPECT_EQ(wrong.matched, 0);
  EXPECT_EQ(wrong.predicted, 1);
  EXPECT_EQ(wrong.gold, 1);
  // 3 gold, 2 predicted, 1 exact match: P = 1/2, R = 1/3, F1 = 0.4.
  const Prf mixed = SrlPrf({{{{0, 0}, "A"}, {{2, 3}, "B"}}, {{{1, 1}, "C"}}},
                           {{{{0, 0}, "A"}, {{2, 2}, "B"}}, {}});
  EXPECT_EQ(mixed.matched, 1);
  EXPECT_DOUBLE_EQ(mixed.precision, 0.5);
  EXPECT_NEAR(mixed.recall, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(mixed.f1, 0.4, 1e-15);
  // Matches do not cross annotations.
  EXPECT_EQ(SrlPrf({{{{0, 0}, "A"}}, {}}, {{}, {{{0, 0}, "A"}}}).matched, 0);
  EXPECT_THROW(SrlPrf({{}}, {}), Error);
}

TEST(Prf, Properties) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::vector<ElementSpan>> gold, pred;
    for (int s = 0; s < 4; ++s) {
      std::vector<ElementSpan> g, p;
      for (int i = 0; i < 4; ++i) {
        const ElementSpan e{{i, i}, rng() % 2 ? "A" : "B"};
        if (rng() % 2) g.push_back(e);
        if (rng() % 2) p.push_back(e);
      }
      gold.push_back(g);
      pred.push_back(p);
    }
    const Prf r = SrlPrf(gold, pred);
    for (double v : {r.precision, r.recall, r.f1}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_LE(r.f1, std::max(r.precision, r.recall) + 1e-15);
    if (r.gold + r.predicted > 0) {
      EXPECT_EQ(r.f1 == 0.0, r.matched == 0);
    }
    // Permuting sentences leaves the tallies unchanged.
    std::vector<int> order = {0, 1, 2, 3};
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<ElementSpan>> g2, p2;
    for (int i : order) {
      g2.push_back(gold[i]);
      p2.push_back(pred[i]);
    }
    const Prf r2 = SrlPrf(g2, p2);
    EXPECT_EQ(r2.matched, r.matched);
    EXPECT_EQ(r2.f1, r.f1);
  }
}

TEST(EvalReport, MetricAndJson) {
  EvalReport fi{"fi", std::nullopt, Accuracy{0.75, 3, 4}, 0};
  EXPECT_DOUBLE_EQ(fi.metric(), 0.75);
  const auto j = fi.ToJson();
  EXPECT_TRUE(j.contains("accuracy"));
  EXPECT_FALSE(j.contains("f1"));
  EvalReport joint{"joint", PrfFromCounts(1, 2, 2), Accuracy{1.0, 2, 2}, 0};
  EXPECT_DOUBLE_EQ(joint.metric(), 0.75);
}

}  // namespace
}  // namespace frameparse
