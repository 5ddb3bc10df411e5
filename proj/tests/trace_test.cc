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

#include "frameparse/trace.h"

#include <regex>
#include <sstream>

#include <gtest/gtest.h>

#include "frameparse/synth.h"
#include "test_util.h"

namespace frameparse {
namespace {

using testing::MakeSentence;

constexpr char kRachel[] =
    "(S (NP (NNP Rachel)) (VP (VBD had) (NP (JJ little) (NN time))))";

FrameParser Parser(const std::vector<Sentence>& extra = {}) {
  std::vector<Sentence> corpus = GenerateCorpus(1, 20);
  corpus.insert(corpus.end(), extra.begin(), extra.end());
  const Ontology o = SynthOntology();
  return FrameParser(testing::TinyConfig(), Vocab::Build(corpus, o), o, 1);
}

int Count(const std::string& text, const std::regex& re) {
  return static_cast<int>(std::distance(
      std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

TEST(Trace, ByteIdenticalAcrossRuns) {
  const FrameParser p = Parser();
  const Sentence s = GenerateCorpus(1, 1)[0];
  EXPECT_EQ(GenerateTrace(p, s), GenerateTrace(p, s));
  const FrameParser q = FrameParser::FromJson(p.ToJson());
  EXPECT_EQ(GenerateTrace(q, s), GenerateTrace(p, s));
}

TEST(Trace, OneTokenSentenceListsEveryLayer) {
  const Sentence s = MakeSentence("(NN time)");
  const FrameParser p = Parser({s});
  const std::string t = GenerateTrace(p, s);
  EXPECT_EQ(Count(t, std::regex("\nH[0-9]+ shape")), p.config().gcn_layers + 1);
}

TEST(Trace, PredicatePathListsFourLabels) {
  const Sentence s = MakeSentence(kRachel);
  const FrameParser p = Parser({s});
  const std::string t = GenerateTrace(p, s, 1);
  EXPECT_NE(t.find("== predicate paths (reference token 1 had)"), std::string::npos);
  EXPECT_NE(t.find("  token 2 little: JJ NP VP VBD\n"), std::string::npos) << t;
}

TEST(Trace, ShapesFollowTheDimensionChain) {
  const Sentence s = MakeSentence(kRachel);
  const FrameParser p = Parser({s});
  const ModelConfig& c = p.config();
  const std::string t = GenerateTrace(p, s, 1);
  const int n = s.size(), nodes = s.tree.size();
  auto has = [&](const std::string& line) {
    EXPECT_NE(t.find(line), std::string::npos) << line;
  };
  has("== adjacency shape " + std::to_string(nodes) + "x" + std::to_string(nodes));
  has("H0 shape " + std::to_string(nodes) + "x" + std::to_string(c.constituent_dim));
  has("H" + std::to_string(c.gcn_layers) + " shape " + std::to_string(nodes) + "x" +
      std::to_string(c.gcn_hidden));
  has("p_root shape " + std::to_string(n) + "x" + std::to_string(c.gcn_hidden));
  has("a shape " + std::to_string(n) + "x" + std::to_string(2 * c.backbone_hidden));
  has("ti_emissions shape " + std::to_string(n) + "x4");
  has("p_l shape " + std::to_string(n) + "x" + std::to_string(c.gcn_hidden));
  has("b shape " + std::to_string(n) + "x" + std::to_string(2 * c.backbone_hidden));
}

}  // namespace
}  // namespace frameparse
