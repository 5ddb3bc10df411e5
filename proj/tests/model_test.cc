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

#include "frameparse/model.h"

#include <cmath>

#include <gtest/gtest.h>

#include "frameparse/errors.h"
#include "frameparse/synth.h"
#include "test_util.h"

namespace frameparse {
namespace {

using testing::MakeSentence;
using testing::TinyConfig;

class ModelTest : public ::testing::Test {
 protected:
  ModelTest() : corpus_(GenerateCorpus(1, 40)), ontology_(SynthOntology()) {}

  FrameParser Make(ModelConfig config = TinyConfig(), uint64_t seed = 1) const {
    return FrameParser(config, Vocab::Build(corpus_, ontology_), ontology_, seed);
  }

  const Sentence& WithAnnotations(int min_annotations) const {
    for (const Sentence& s : corpus_) {
      if (static_cast<int>(s.annotations.size()) >= min_annotations) return s;
    }
    throw Error("no such sentence");
  }

  static void ZeroParams(FrameParser* p, const std::string& prefix) {
    for (Parameter& q : p->params().params()) {
      if (q.name.rfind(prefix, 0) == 0) {
        std::fill(q.tensor.mutable_values().begin(), q.tensor.mutable_values().end(), 0.0);
      }
    }
  }

  std::vector<Sentence> corpus_;
  Ontology ontology_;
};

TEST(LexicalUnitKey, CoarsePos) {
  const Sentence s = MakeSentence(
      "(S (NP (PRP She)) (VP (VBD Picked) (NP (DT the) (NN box)) (PRT (RP up))))");
  EXPECT_EQ(LexicalUnitKey(s, {1, 4}), "picked up.v");
  EXPECT_EQ(LexicalUnitKey(s, {3}), "box.n");
  EXPECT_EQ(LexicalUnitKey(s, {2}), "the.d");
}

TEST_F(ModelTest, ZeroBackboneGivesLayerNormOfEmbeddings) {
  FrameParser p = Make();
  ZeroParams(&p, "backbone_a");
  const Sentence& s = corpus_[0];
  const SentenceEncoding enc = p.Encode(s);
  const ad::Tensor want =
      ad::LayerNorm(enc.e, p.model().ln_a_gain, p.model().ln_a_bias);
  ASSERT_EQ(enc.a.rows(), s.size());
  ASSERT_EQ(enc.a.cols(), 2 * p.config().backbone_hidden);
  for (size_t i = 0; i < want.size(); ++i) {
    EXPECT_NEAR(enc.a.values()[i], want.values()[i], 1e-12);
  }
}

TEST_F(ModelTest, PredicateBackboneIsCachedPerFirstIndex) {
  const FrameParser p = Make();
  SentenceEncoding enc = p.Encode(corpus_[0]);
  const ad::Tensor& b1 = p.PredicateBackbone(&enc, 1);
  const ad::Tensor& b2 = p.PredicateBackbone(&enc, 1);
  EXPECT_EQ(b1.impl(), b2.impl());
  const ad::Tensor& b0 = p.PredicateBackbone(&enc, 0);
  EXPECT_NE(b0.impl(), b1.impl());
  EXPECT_EQ(enc.b_cache.size(), 2u);
}

TEST_F(ModelTest, BracketingChangesEncodingOnlyWithGcn) {
  const Sentence flat = MakeSentence(
      "(S (NP (PRP she)) (VP (VBD saw) (NP (DT the) (NN man)) (PP (IN with) (NP (DT the) (NN telescope)))))");
  const Sentence nested = MakeSentence(
      "(S (NP (PRP she)) (VP (VBD saw) (NP (NP (DT the) (NN man)) (PP (IN with) (NP (DT the) (NN telescope))))))");
  for (bool gcn : {true, false}) {
    ModelConfig c = TinyConfig();
    c.use_gcn = gcn;
    const FrameParser p = Make(c);
    const ad::Tensor a = p.Encode(flat).a, b = p.Encode(nested).a;
    double diff = 0;
    for (size_t i = 0; i < a.size(); ++i) diff += std::abs(a.values()[i] - b.values()[i]);
    if (gcn) {
      EXPECT_GT(diff, 1e-6);
    } else {
      EXPECT_EQ(diff, 0.0);
    }
  }
}

TEST_F(ModelTest, DisabledGcnKeepsDimensions) {
  ModelConfig c = TinyConfig();
  c.use_gcn = false;
  const FrameParser off = Make(c);
  const FrameParser on = Make();
  EXPECT_EQ(off.params().Find("gcn.labels"), nullptr);
  EXPECT_NE(on.params().Find("gcn.labels"), nullptr);
  const SentenceEncoding e_off = off.Encode(corpus_[0]);
  const SentenceEncoding e_on = on.Encode(corpus_[0]);
  EXPECT_EQ(e_off.p_root.cols(), e_on.p_root.cols());
  for (double v : e_off.p_root.values()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(off.model().backbone_a.input_dim(), on.model().backbone_a.input_dim());
}

TEST_F(ModelTest, FrameMaskRestrictsProbabilityMass) {
  const FrameParser p = Make();
  const Sentence& s = corpus_[0];
  const SentenceEncoding enc = p.Encode(s);
  const std::vector<int> target = s.annotations[0].target;
  for (const auto& [lu, frames] : ontology_.lu_to_frames) {
    const ad::Tensor lp = ad::LogSoftmax(p.FiLogits(enc, lu, target));
    double total = 0, allowed = 0;
    for (int f = 0; f < lp.cols(); ++f) {
      const double prob = std::exp(lp.at(0, f));
      total += prob;
      if (frames.count(p.vocab().frames.Str(f))) allowed += prob;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(allowed, 1.0, 1e-12);
    EXPECT_TRUE(frames.count(p.FiPredict(enc, lu, target)));
  }
  EXPECT_THROW(p.FiLogits(enc, "unknown.v", target), DataError);
}

TEST_F(ModelTest, UnambiguousLexicalUnitHasZeroFrameLoss) {
  const FrameParser p = Make();
  for (const Sentence& s : corpus_) {
    const SentenceEncoding enc = p.Encode(s);
    for (const FrameAnnotation& a : s.annotations) {
      const double loss = p.FiLoss(enc, a).item();
      if (ontology_.lu_to_frames.at(a.lexical_unit).size() == 1) {
        EXPECT_NEAR(loss, 0.0, 1e-12);
      } else {
        EXPECT_GT(loss, 0.0);
      }
    }
  }
}

TEST_F(ModelTest, PredicateShapesAndZeroProjection) {
  FrameParser p = Make();
  const Sentence& s = corpus_[0];
  const FrameAnnotation& a = s.annotations[0];
  SentenceEncoding enc = p.Encode(s);
  const PredicateRepr pred = p.Predicate(enc, a.lexical_unit, a.frame, a.target);
  const ModelConfig& c = p.config();
  EXPECT_EQ(pred.z.cols(), c.lu_dim + 2 * c.backbone_hidden + c.frame_dim);
  EXPECT_EQ(pred.pr.cols(), c.ai_projection_dim);
  const ad::Tensor em = p.AiEmissions(&enc, pred, a.target);
  EXPECT_EQ(em.rows(), s.size());
  EXPECT_EQ(em.cols(), kNumIob2Labels);

  ZeroParams(&p, "ai.v1");
  SentenceEncoding enc2 = p.Encode(s);
  const PredicateRepr zero = p.Predicate(enc2, a.lexical_unit, a.frame, a.target);
  const ad::Tensor zero_em = p.AiEmissions(&enc2, zero, a.target);
  for (double v : zero_em.values()) EXPECT_EQ(v, 0.0);
}

TEST_F(ModelTest, AcEmissionsCoverEverySpan) {
  const FrameParser p = Make();
  const Sentence& s = corpus_[0];
  const FrameAnnotation& a = s.annotations[0];
  SentenceEncoding enc = p.Encode(s);
  const PredicateRepr pred = p.Predicate(enc, a.lexical_unit, a.frame, a.target);
  const ad::Tensor em = p.AcEmissions(&enc, pred, a.target, {{0, 0}, {1, 2}});
  EXPECT_EQ(em.rows(), 2);
  EXPECT_EQ(em.cols(), p.vocab().elements.size());
  EXPECT_THROW(p.AcEmissions(&enc, pred, a.target, {}), DataError);
  EXPECT_THROW(p.AcEmissions(&enc, pred, a.target, {{0, s.size()}}), DataError);
  const auto labels = p.AcPredict(&enc, a.lexical_unit, a.frame, a.target, {{0, 0}, {1, 2}});
  for (const auto& l : labels) EXPECT_TRUE(ontology_.frame_to_elements.at(a.frame).count(l));
}

TEST_F(ModelTest, JointLossIsTheSumOfTaskLosses) {
  const FrameParser p = Make();
  std::vector<const Sentence*> batch;
  for (int i = 0; i < 6; ++i) batch.push_back(&corpus_[i]);
  const double joint = p.JointBatchLoss(batch).item();
  const double sum =
      p.TiBatchLoss(batch).item() + p.FiBatchLoss(batch).item() + p.SrlBatchLoss(batch).item();
  EXPECT_EQ(joint, sum);
  const TaskLosses l = p.BatchLoss(batch, Task::kJoint);
  EXPECT_EQ(l.total.item(), (l.ti.item() + l.fi.item()) + l.srl.item());
}

TEST_F(ModelTest, TaskModesZeroTheOtherLosses) {
  const FrameParser p = Make();
  const TaskLosses ti = p.SentenceLoss(corpus_[0], Task::kTi);
  EXPECT_EQ(ti.fi.item(), 0.0);
  EXPECT_EQ(ti.srl.item(), 0.0);
  EXPECT_EQ(ti.total.item(), ti.ti.item());
  const TaskLosses srl = p.SentenceLoss(corpus_[0], Task::kSrl);
  EXPECT_EQ(srl.ti.item(), 0.0);
  EXPECT_GT(srl.srl.item(), 0.0);
}

TEST_F(ModelTest, DuplicatedBatchKeepsTheMean) {
  const FrameParser p = Make();
  std::vector<const Sentence*> batch = {&corpus_[0], &corpus_[1], &corpus_[2]};
  std::vector<const Sentence*> doubled = batch;
  doubled.insert(doubled.end(), batch.begin(), batch.end());
  EXPECT_NEAR(p.JointBatchLoss(batch).item(), p.JointBatchLoss(doubled).item(), 1e-12);
}

TEST_F(ModelTest, SentenceWithoutAnnotations) {
  const FrameParser p = Make();
  Sentence s = corpus_[0];
  s.annotations.clear();
  const TaskLosses l = p.SentenceLoss(s, Task::kJoint);
  EXPECT_EQ(l.fi.item(), 0.0);
  EXPECT_EQ(l.srl.item(), 0.0);
  EXPECT_GT(l.ti.item(), 0.0);
  EXPECT_TRUE(p.Parse(s, GoldMode::kTargets).annotations.empty());
}

TEST_F(ModelTest, GoldModesKeepGoldStructure) {
  const FrameParser p = Make();
  const Sentence& s = WithAnnotations(2);
  const ParseResult targets = p.Parse(s, GoldMode::kTargets);
  const ParseResult frames = p.Parse(s, GoldMode::kTargetsAndFrames);
  ASSERT_EQ(targets.annotations.size(), s.annotations.size());
  for (size_t i = 0; i < s.annotations.size(); ++i) {
    EXPECT_EQ(targets.annotations[i].target, s.annotations[i].target);
    EXPECT_EQ(frames.annotations[i].frame, s.annotations[i].frame);
    EXPECT_TRUE(ontology_.lu_to_frames.at(s.annotations[i].lexical_unit)
                    .count(targets.annotations[i].frame));
  }
}

TEST_F(ModelTest, UnknownTokensMapToUnknownAndUnknownTagsFail) {
  const FrameParser p = Make();
  Sentence s = MakeSentence("(S (NP (NNP Zork)) (VP (VBD walked)))");
  EXPECT_NO_THROW(p.Encode(s));
  Sentence bad = MakeSentence("(S (NP (XX Zork)) (VP (VBD walked)))");
  EXPECT_THROW(p.Encode(bad), DataError);
}

TEST_F(ModelTest, CheckpointRoundTrip) {
  const FrameParser p = Make(TinyConfig(), 5);
  const std::string text = p.ToJson();
  const FrameParser q = FrameParser::FromJson(text);
  EXPECT_EQ(q.ToJson(), text);
  EXPECT_EQ(q.ontology(), p.ontology());
  for (int i = 0; i < 10; ++i) {
    const ParseResult a = p.Parse(corpus_[i], GoldMode::kNone);
    const ParseResult b = q.Parse(corpus_[i], GoldMode::kNone);
    EXPECT_EQ(a.annotations, b.annotations);
  }
  EXPECT_THROW(FrameParser::FromJson("{}"), DataError);
  EXPECT_THROW(FrameParser::Load("/nonexistent/model.json"), DataError);
}

TEST_F(ModelTest, InconsistentConfigIsRejected) {
  ModelConfig c = TinyConfig();
  c.backbone_hidden = 7;
  EXPECT_THROW(Make(c), ConfigError);
}

}  // namespace
}  // namespace frameparse
