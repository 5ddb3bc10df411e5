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

#include "frameparse/training.h"

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "frameparse/errors.h"
#include "frameparse/synth.h"
#include "test_util.h"

namespace frameparse {
namespace {

using testing::TinyConfig;

struct Scalar {
  ParameterSet ps;
  ad::Tensor theta;

  explicit Scalar(double value, bool decay = true) {
    theta = decay ? ps.Zeros("theta", 1, 1) : ps.Bias("theta", 1);
    theta.mutable_values()[0] = value;
  }
  void SetGrad(double g) {
    theta.ZeroGrad();
    theta.mutable_grad()[0] = g;
  }
};

TEST(Adam, ZeroGradientAndDecayLeavesParameters) {
  Scalar s(0.7);
  TrainConfig c;
  c.weight_decay = 0.0;
  OptimState st = MakeOptimState(s.ps, c);
  s.SetGrad(0.0);
  AdamStep(&st, &s.ps);
  EXPECT_EQ(s.theta.values()[0], 0.7);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  Scalar s(1.0);
  TrainConfig c;
  c.lr = 0.1;
  c.weight_decay = 0.0;
  OptimState st = MakeOptimState(s.ps, c);
  s.SetGrad(1.0);
  AdamStep(&st, &s.ps);
  EXPECT_NEAR(s.theta.values()[0], 0.9, 1e-6);
}

TEST(Adam, DescendsOnSquare) {
  Scalar s(1.0);
  TrainConfig c;
  c.lr = 0.1;
  OptimState st = MakeOptimState(s.ps, c);
  double prev = 1.0;
  for (int i = 0; i < 5; ++i) {
    const double x = s.theta.values()[0];
    s.SetGrad(2 * x);
    AdamStep(&st, &s.ps);
    const double f = s.theta.values()[0] * s.theta.values()[0];
    EXPECT_LT(f, prev);
    prev = f;
  }
}

TEST(Adam, ZeroDecayMatchesPlainAdam) {
  Scalar s(0.3);
  TrainConfig c;
  c.lr = 0.05;
  c.weight_decay = 0.0;
  OptimState st = MakeOptimState(s.ps, c);
  double theta = 0.3, m = 0, v = 0;
  for (int t = 1; t <= 20; ++t) {
    const double g = std::sin(t) + theta;
    s.SetGrad(g);
    AdamStep(&st, &s.ps);
    m = 0.9 * m + (1.0 - 0.9) * g;
    v = 0.999 * v + (1.0 - 0.999) * g * g;
    theta -= 0.05 * (m / (1 - std::pow(0.9, t))) / (std::sqrt(v / (1 - std::pow(0.999, t))) + 1e-8);
    EXPECT_EQ(s.theta.values()[0], theta);
  }
}

TEST(Adam, DecoupledDecaySkipsExemptParameters) {
  Scalar decayed(1.0, true), exempt(1.0, false);
  TrainConfig c;
  c.lr = 0.1;
  c.weight_decay = 0.5;
  OptimState a = MakeOptimState(decayed.ps, c), b = MakeOptimState(exempt.ps, c);
  decayed.SetGrad(0.0);
  exempt.SetGrad(0.0);
  AdamStep(&a, &decayed.ps);
  AdamStep(&b, &exempt.ps);
  EXPECT_NEAR(decayed.theta.values()[0], 1.0 - 0.1 * 0.5, 1e-15);
  EXPECT_EQ(exempt.theta.values()[0], 1.0);
}

TEST(Adam, MissingGradient) {
  Scalar s(1.0);
  OptimState st = MakeOptimState(s.ps, TrainConfig{});
  EXPECT_THROW(AdamStep(&st, &s.ps), Error);
  EXPECT_NO_THROW(AdamStep(&st, &s.ps, true));
  EXPECT_EQ(s.theta.values()[0], 1.0);
}

TEST(ClipGradNorm, NeverIncreasesAndKeepsDirection) {
  ParameterSet ps;
  ad::Tensor a = ps.Zeros("a", 1, 2), b = ps.Zeros("b", 1, 1);
  a.mutable_grad() = {3.0, 0.0};
  b.mutable_grad() = {4.0};
  EXPECT_DOUBLE_EQ(ClipGradNorm(&ps, 10.0), 5.0);
  EXPECT_EQ(a.grad()[0], 3.0);
  EXPECT_DOUBLE_EQ(ClipGradNorm(&ps, 1.0), 5.0);
  EXPECT_NEAR(a.grad()[0], 0.6, 1e-15);
  EXPECT_NEAR(b.grad()[0], 0.8, 1e-15);
  EXPECT_NEAR(ClipGradNorm(&ps, 1.0), 1.0, 1e-15);
}

TEST(ReduceOnPlateau, ImprovingMetricKeepsRate) {
  ReduceOnPlateau s(2, 0.5, 1e-4);
  double lr = 1.0;
  for (int i = 0; i < 10; ++i) EXPECT_FALSE(s.Step(0.1 * i, &lr));
  EXPECT_EQ(lr, 1.0);
}

TEST(ReduceOnPlateau, FlatMetricHalvesOnce) {
  ReduceOnPlateau s(3, 0.5, 1e-4);
  double lr = 1.0;
  int reductions = 0;
  for (int i = 0; i < 4; ++i) reductions += s.Step(0.5, &lr);
  EXPECT_EQ(reductions, 1);
  EXPECT_EQ(lr, 0.5);
}

TEST(ReduceOnPlateau, HandSimulatedTrace) {
  ReduceOnPlateau s(2, 0.5, 1e-4);
  double lr = 1.0;
  const std::vector<double> metric = {0.5, 0.6, 0.6, 0.60005, 0.7, 0.7, 0.7, 0.69, 0.71, 0.71};
  const std::vector<int> bad = {0, 0, 1, 0, 0, 1, 0, 1, 0, 1};
  const std::vector<double> rate = {1, 1, 1, 0.5, 0.5, 0.5, 0.25, 0.25, 0.25, 0.25};
  for (size_t i = 0; i < metric.size(); ++i) {
    s.Step(metric[i], &lr);
    EXPECT_EQ(s.num_bad_epochs(), bad[i]) << "epoch " << i;
    EXPECT_EQ(lr, rate[i]) << "epoch " << i;
  }
}

class TrainingTest : public ::testing::Test {
 protected:
  TrainingTest() : corpus_(GenerateCorpus(2, 12)), ontology_(SynthOntology()) {}

  FrameParser Make() const {
    return FrameParser(TinyConfig(), Vocab::Build(corpus_, ontology_), ontology_, 3);
  }

  TrainConfig Quick(Task task) const {
    TrainConfig c;
    c.task = task;
    c.max_epochs = 3;
    c.batch_size = 4;
    return c;
  }

  std::vector<Sentence> corpus_;
  Ontology ontology_;
};

TEST_F(TrainingTest, L2PenaltyCoversTaskParameters) {
  const FrameParser p = Make();
  TrainConfig c;
  c.l2_transitions = 0.5;
  c.l2_bilinear = 0.25;
  auto sq = [](const ad::Tensor& t) {
    double s = 0;
    for (double v : t.values()) s += v * v;
    return s;
  };
  const ModelParams& m = p.model();
  double bilinear = 0;
  for (const auto& u : m.ai_bilinear.forms) bilinear += sq(u);
  EXPECT_NEAR(L2Penalty(p, c, Task::kTi).item(), 0.5 * sq(m.ti_crf.transitions), 1e-12);
  EXPECT_EQ(L2Penalty(p, c, Task::kFi).item(), 0.0);
  EXPECT_NEAR(L2Penalty(p, c, Task::kSrl).item(),
              0.5 * (sq(m.ai_crf.transitions) + sq(m.ac_crf.transitions)) + 0.25 * bilinear,
              1e-12);
}

TEST_F(TrainingTest, ZeroLearningRateKeepsDevMetric) {
  FrameParser p = Make();
  TrainConfig c = Quick(Task::kJoint);
  c.lr = 0.0;
  const TrainResult r = Train(&p, corpus_, corpus_, c);
  ASSERT_EQ(r.log.size(), 3u);
  for (const EpochRecord& e : r.log) EXPECT_EQ(e.dev_metric, r.log[0].dev_metric);
}

TEST_F(TrainingTest, FixedSeedIsDeterministic) {
  for (Task task : {Task::kTi, Task::kJoint}) {
    FrameParser a = Make(), b = Make();
    std::ostringstream la, lb;
    WriteMetricLog(Train(&a, corpus_, corpus_, Quick(task)).log, la);
    WriteMetricLog(Train(&b, corpus_, corpus_, Quick(task)).log, lb);
    EXPECT_EQ(la.str(), lb.str());
    EXPECT_EQ(a.ToJson(), b.ToJson());
  }
}

TEST_F(TrainingTest, BestEpochIsRestored) {
  FrameParser p = Make();
  TrainConfig c = Quick(Task::kSrl);
  c.max_epochs = 6;
  const TrainResult r = Train(&p, corpus_, corpus_, c);
  const EvalReport e = Evaluate(p, corpus_, Task::kSrl, DevGoldMode(Task::kSrl));
  EXPECT_EQ(e.metric(), r.best_metric);
}

TEST_F(TrainingTest, MetricLogFormat) {
  std::ostringstream out;
  WriteMetricLog({{1, 0.5, 0.25, 0.125, 0.875, 0.1, 0.001}}, out);
  EXPECT_EQ(out.str(),
            "epoch,ti_loss,fi_loss,srl_loss,loss,dev_metric,lr\n"
            "1,0.5,0.25,0.125,0.875,0.10000000000000001,0.001\n");
}

TEST_F(TrainingTest, EvaluateReportsPerTask) {
  const FrameParser p = Make();
  const EvalReport fi = Evaluate(p, corpus_, Task::kFi, GoldMode::kTargets);
  EXPECT_TRUE(fi.accuracy.has_value());
  EXPECT_FALSE(fi.prf.has_value());
  const EvalReport ti = Evaluate(p, corpus_, Task::kTi, GoldMode::kNone);
  EXPECT_TRUE(ti.prf.has_value());
  const EvalReport joint = Evaluate(p, corpus_, Task::kJoint, GoldMode::kTargets);
  EXPECT_TRUE(joint.prf && joint.accuracy);
  EXPECT_EQ(DevGoldMode(Task::kSrl), GoldMode::kTargetsAndFrames);
}

TEST(GradCheckExample, IsSmallAndAmbiguous) {
  const Sentence s = GradCheckExample(1);
  EXPECT_LE(s.size(), 6);
  ASSERT_FALSE(s.annotations.empty());
  EXPECT_GE(s.annotations[0].elements.size(), 2u);
  EXPECT_GE(SynthOntology().lu_to_frames.at(s.annotations[0].lexical_unit).size(), 2u);
}

TEST(CheckLossGradients, SampledTinyModel) {
  ad::GradCheckOptions o;
  o.max_entries_per_tensor = 6;
  const auto checks = CheckLossGradients(TinyConfig(), 1, o);
  ASSERT_EQ(checks.size(), 4u);
  for (const auto& c : checks) {
    EXPECT_TRUE(c.report.passed) << c.loss << " " << c.report.max_rel_error;
    EXPECT_GT(c.report.entries.size(), 0u);
  }
}

}  // namespace
}  // namespace frameparse
