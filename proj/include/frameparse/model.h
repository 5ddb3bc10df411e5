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

#ifndef FRAMEPARSE_MODEL_H_
#define FRAMEPARSE_MODEL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "frameparse/autodiff.h"
#include "frameparse/config.h"
#include "frameparse/corpus.h"
#include "frameparse/crf.h"
#include "frameparse/gcn.h"
#include "frameparse/layers.h"

namespace frameparse {

// Every trainable array of the parser, grouped by component.
struct ModelParams {
  EmbeddingTable tokens;
  EmbeddingTable pos;
  std::optional<GcnParams> gcn;  // absent when the GCN is disabled

  BiLstm backbone_a;
  ad::Tensor ln_a_gain, ln_a_bias;
  BiLstm backbone_b;
  ad::Tensor ln_b_gain, ln_b_bias;

  Linear ti_projection;
  CrfParams ti_crf;

  std::vector<Linear> fi_layers;  // hidden layers, then the frame projection
  EmbeddingTable lexical_units;
  EmbeddingTable frames;

  ad::Tensor v1;  // predicate projection, no bias
  ad::Tensor v2;  // token projection, no bias
  LabelBilinear ai_bilinear;
  CrfParams ai_crf;

  ad::Tensor y;  // span projection, no bias
  Linear ac_output;
  CrfParams ac_crf;
};

// Dropout switch shared by one forward pass.
struct ForwardMode {
  bool train = false;
  std::mt19937_64* rng = nullptr;
};

// Encoded sentence. The predicate-path backbone output b is computed on
// demand per first target index and cached.
struct SentenceEncoding {
  const Sentence* sentence = nullptr;
  ForwardMode mode;
  ad::Tensor e;       // n x (token_dim + pos_dim)
  std::optional<ConstituentEncodings> constituents;
  ad::Tensor p_root;  // n x path dim
  ad::Tensor a;       // n x 2h
  std::map<int, ad::Tensor> b_cache;
  std::map<int, ad::Tensor> p_cache;  // p_l per first target index
};

// z = e_lu ⊕ t ⊕ e_frame and its projection pr = tanh(z V1).
struct PredicateRepr {
  ad::Tensor z;
  ad::Tensor pr;
};

struct TaskLosses {
  ad::Tensor ti;
  ad::Tensor fi;
  ad::Tensor srl;
  ad::Tensor total;  // sum of the losses the task mode includes
};

enum class GoldMode { kNone, kTargets, kTargetsAndFrames };

struct ParseResult {
  std::vector<FrameAnnotation> annotations;
  // Predicted targets whose lexical-unit key is not in the ontology.
  int dropped_targets = 0;
};

// Lowercased target words joined by spaces, "." and a coarse POS category
// derived from the first target word (n, v, a, adv, prep, else the first
// letter of the tag).
std::string LexicalUnitKey(const Sentence& sentence,
                           const std::vector<int>& target);

class FrameParser {
 public:
  // Throws ConfigError when the dimension chain is inconsistent.
  FrameParser(ModelConfig config, Vocab vocab, Ontology ontology,
              uint64_t seed);
  FrameParser(const FrameParser&) = delete;
  FrameParser& operator=(const FrameParser&) = delete;
  FrameParser(FrameParser&&) = default;
  FrameParser& operator=(FrameParser&&) = default;

  const ModelConfig& config() const { return config_; }
  const Vocab& vocab() const { return vocab_; }
  const Ontology& ontology() const { return ontology_; }
  const ModelParams& model() const { return m_; }
  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }

  // Throws DataError when the tree does not match the tokens or a POS tag or
  // constituent label is unknown.
  SentenceEncoding Encode(const Sentence& sentence,
                          ForwardMode mode = {}) const;
  // Path feature sequence p_l and backbone-B output for the target whose
  // first index is `first`.
  const ad::Tensor& PredicatePath(SentenceEncoding* enc, int first) const;
  const ad::Tensor& PredicateBackbone(SentenceEncoding* enc, int first) const;

  // Target identification.
  ad::Tensor TiEmissions(const SentenceEncoding& enc) const;
  ad::Tensor TiLoss(const SentenceEncoding& enc) const;
  std::vector<std::vector<int>> TiPredict(const SentenceEncoding& enc) const;

  // Sum of the rows of a at every target index; throws on an empty or
  // out-of-range index set.
  ad::Tensor TargetRepr(const SentenceEncoding& enc,
                        const std::vector<int>& target) const;

  // Frame identification. Logits carry the ontology mask.
  ad::Tensor FiLogits(const SentenceEncoding& enc, const std::string& lu,
                      const std::vector<int>& target) const;
  ad::Tensor FiLoss(const SentenceEncoding& enc,
                    const FrameAnnotation& annotation) const;
  std::string FiPredict(const SentenceEncoding& enc, const std::string& lu,
                        const std::vector<int>& target) const;

  PredicateRepr Predicate(const SentenceEncoding& enc, const std::string& lu,
                          const std::string& frame,
                          const std::vector<int>& target) const;

  // Argument identification over B/I/O.
  ad::Tensor AiEmissions(SentenceEncoding* enc, const PredicateRepr& pred,
                         const std::vector<int>& target) const;
  ad::Tensor AiLoss(SentenceEncoding* enc,
                    const FrameAnnotation& annotation) const;
  std::vector<Span> AiPredict(SentenceEncoding* enc, const std::string& lu,
                              const std::string& frame,
                              const std::vector<int>& target) const;

  // Argument classification over a sequence of spans.
  ad::Tensor AcEmissions(SentenceEncoding* enc, const PredicateRepr& pred,
                         const std::vector<int>& target,
                         const std::vector<Span>& spans) const;
  // Zero when the annotation has no elements.
  ad::Tensor AcLoss(SentenceEncoding* enc,
                    const FrameAnnotation& annotation) const;
  std::vector<std::string> AcPredict(SentenceEncoding* enc,
                                     const std::string& lu,
                                     const std::string& frame,
                                     const std::vector<int>& target,
                                     const std::vector<Span>& spans) const;

  // Per-sentence losses: TI NLL, mean FI cross-entropy and mean AI+AC NLL
  // over the annotations (0 without annotations).
  TaskLosses SentenceLoss(const Sentence& sentence, Task task,
                          ForwardMode mode = {}) const;
  // Batch means of SentenceLoss.
  TaskLosses BatchLoss(const std::vector<const Sentence*>& batch, Task task,
                       ForwardMode mode = {}) const;
  ad::Tensor TiBatchLoss(const std::vector<const Sentence*>& batch) const;
  ad::Tensor FiBatchLoss(const std::vector<const Sentence*>& batch) const;
  ad::Tensor SrlBatchLoss(const std::vector<const Sentence*>& batch) const;
  ad::Tensor JointBatchLoss(const std::vector<const Sentence*>& batch) const;

  // End-to-end prediction. Gold modes take targets (and frames) from the
  // sentence's annotations.
  ParseResult Parse(const Sentence& sentence, GoldMode gold) const;

  void Save(const std::string& path) const;
  std::string ToJson() const;
  static FrameParser Load(const std::string& path);
  static FrameParser FromJson(const std::string& text);

 private:
  ad::Tensor PathWidthZeros(int rows) const;
  CrfConstraints ElementConstraintsFor(const std::string& frame) const;

  ModelConfig config_;
  Vocab vocab_;
  Ontology ontology_;
  ParameterSet params_;
  ModelParams m_;
  CrfConstraints iobc_;
  CrfConstraints iob2_;
  std::map<std::string, std::vector<double>> frame_penalties_;
};

}  // namespace frameparse

#endif  // FRAMEPARSE_MODEL_H_
