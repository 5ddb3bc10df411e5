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

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "frameparse/errors.h"
#include "json.hpp"

namespace frameparse {
namespace {

using nlohmann::ordered_json;

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string CoarsePos(const std::string& tag) {
  if (tag == "IN") return "prep";
  if (tag.empty()) return "x";
  switch (tag[0]) {
    case 'N': return "n";
    case 'V': return "v";
    case 'J': return "a";
    case 'R': return "adv";
    default: return Lower(tag.substr(0, 1));
  }
}

int FirstIndex(const std::vector<int>& target) {
  if (target.empty()) throw DataError("empty target");
  return *std::min_element(target.begin(), target.end());
}

std::vector<ElementSpan> SortedElements(const FrameAnnotation& annotation) {
  std::vector<ElementSpan> elements = annotation.elements;
  std::sort(elements.begin(), elements.end(),
            [](const ElementSpan& x, const ElementSpan& y) { return x.span < y.span; });
  return elements;
}

ad::Tensor MeanOf(const std::vector<ad::Tensor>& terms) {
  if (terms.empty()) return ad::Tensor::Scalar(0.0);
  ad::Tensor sum = terms[0];
  for (size_t i = 1; i < terms.size(); ++i) sum = ad::Add(sum, terms[i]);
  return ad::Scale(sum, 1.0 / static_cast<double>(terms.size()));
}

int ArgMax(const std::vector<double>& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

ordered_json VocabularyToJson(const Vocabulary& v) {
  ordered_json j;
  j["strings"] = v.strings();
  j["has_unknown"] = v.has_unknown();
  return j;
}

Vocabulary VocabularyFromJson(const nlohmann::json& j, const std::string& name) {
  Vocabulary v = Vocabulary::FromStrings(
      j.at("strings").get<std::vector<std::string>>(), j.at("has_unknown").get<bool>());
  v.name = name;
  return v;
}

}  // namespace

std::string LexicalUnitKey(const Sentence& sentence,
                           const std::vector<int>& target) {
  std::vector<int> sorted = target;
  std::sort(sorted.begin(), sorted.end());
  std::string key;
  for (int i : sorted) {
    if (i < 0 || i >= sentence.size()) throw DataError("target index out of range");
    if (!key.empty()) key += ' ';
    key += Lower(sentence.tokens[i]);
  }
  return key + "." + CoarsePos(sentence.pos_tags[FirstIndex(sorted)]);
}

FrameParser::FrameParser(ModelConfig config, Vocab vocab, Ontology ontology,
                         uint64_t seed)
    : config_(std::move(config)),
      vocab_(std::move(vocab)),
      ontology_(std::move(ontology)),
      iobc_(IobcConstraints()),
      iob2_(Iob2Constraints()) {
  config_.Validate();
  ontology_.Validate();
  if (vocab_.frames.size() == 0 || vocab_.elements.size() == 0) {
    throw ConfigError("ontology defines no frames or frame elements");
  }
  std::mt19937_64 rng(seed);
  const ModelConfig& c = config_;
  const int emb = c.embedding_dim();
  const int path = c.gcn_hidden;
  const int enc = 2 * c.backbone_hidden;
  const int z_dim = c.lu_dim + enc + c.frame_dim;

  m_.tokens.table = params_.Embedding("embeddings.tokens", vocab_.tokens.size(),
                                      c.token_dim, &rng);
  m_.pos.table = params_.Embedding("embeddings.pos", vocab_.pos.size(), c.pos_dim, &rng);
  if (c.use_gcn) {
    m_.gcn = MakeGcn(&params_, "gcn", vocab_.constituents.size(), c.constituent_dim,
                     c.gcn_hidden, c.gcn_layers, &rng);
    m_.gcn->mean_aggregation = c.gcn_mean_aggregation;
  }
  m_.backbone_a = MakeBiLstm(&params_, "backbone_a", emb + path, c.backbone_hidden,
                             c.backbone_layers, &rng);
  m_.ln_a_gain = params_.Gain("backbone_a.ln_gain", enc);
  m_.ln_a_bias = params_.Bias("backbone_a.ln_bias", enc);
  m_.backbone_b = MakeBiLstm(&params_, "backbone_b", emb + path, c.backbone_hidden,
                             c.backbone_layers, &rng);
  m_.ln_b_gain = params_.Gain("backbone_b.ln_gain", enc);
  m_.ln_b_bias = params_.Bias("backbone_b.ln_bias", enc);

  m_.ti_projection = MakeLinear(&params_, "ti.projection", enc, kNumIobcLabels, true, &rng);
  m_.ti_crf = MakeCrf(&params_, "ti.crf", kNumIobcLabels);

  int in = enc;
  for (size_t i = 0; i < c.fi_hidden.size(); ++i) {
    m_.fi_layers.push_back(MakeLinear(&params_, "fi.layer" + std::to_string(i), in,
                                      c.fi_hidden[i], true, &rng));
    in = c.fi_hidden[i];
  }
  m_.fi_layers.push_back(
      MakeLinear(&params_, "fi.output", in, vocab_.frames.size(), true, &rng));
  m_.lexical_units.table = params_.Embedding(
      "embeddings.lexical_units", vocab_.lexical_units.size(), c.lu_dim, &rng);
  m_.frames.table =
      params_.Embedding("embeddings.frames", vocab_.frames.size(), c.frame_dim, &rng);

  m_.v1 = params_.Matrix("ai.v1", z_dim, c.ai_projection_dim, z_dim, &rng);
  m_.v2 = params_.Matrix("ai.v2", enc, c.ai_projection_dim, enc, &rng);
  m_.ai_bilinear = MakeLabelBilinear(&params_, "ai.bilinear", kNumIob2Labels,
                                     c.ai_bilinear_dim, c.ai_bilinear_dim, &rng);
  m_.ai_crf = MakeCrf(&params_, "ai.crf", kNumIob2Labels);

  m_.y = params_.Matrix("ac.y", enc + z_dim, c.ac_projection_dim, enc + z_dim, &rng);
  m_.ac_output = MakeLinear(&params_, "ac.output", c.ac_projection_dim,
                            vocab_.elements.size(), true, &rng);
  m_.ac_crf = MakeCrf(&params_, "ac.crf", vocab_.elements.size());

  for (const auto& [lu, frames] : ontology_.lu_to_frames) {
    const std::vector<bool> mask = FrameMask(ontology_, vocab_, lu);
    std::vector<double> penalty(mask.size());
    for (size_t i = 0; i < mask.size(); ++i) penalty[i] = mask[i] ? 0.0 : kConstraintPenalty;
    frame_penalties_[lu] = std::move(penalty);
  }
}

ad::Tensor FrameParser::PathWidthZeros(int rows) const {
  return ad::Tensor::Zeros(rows, config_.gcn_hidden);
}

CrfConstraints FrameParser::ElementConstraintsFor(const std::string& frame) const {
  return ElementConstraints(ElementMask(ontology_, vocab_, frame));
}

SentenceEncoding FrameParser::Encode(const Sentence& sentence, ForwardMode mode) const {
  const int n = sentence.size();
  if (n == 0) throw DataError("cannot encode an empty sentence");
  if (sentence.tree.num_tokens() != n) {
    throw DataError("tree has " + std::to_string(sentence.tree.num_tokens()) +
                    " tokens, sentence has " + std::to_string(n));
  }
  SentenceEncoding enc;
  enc.sentence = &sentence;
  enc.mode = mode;
  std::vector<int> token_ids, pos_ids;
  for (int i = 0; i < n; ++i) {
    token_ids.push_back(vocab_.tokens.IdOrUnknown(sentence.tokens[i]));
    pos_ids.push_back(vocab_.pos.Id(sentence.pos_tags[i]));
  }
  enc.e = ad::ConcatCols({m_.tokens.Lookup(token_ids), m_.pos.Lookup(pos_ids)});
  if (m_.gcn) {
    enc.constituents =
        GcnForward(*m_.gcn, sentence.tree, NodeLabelIds(sentence.tree, vocab_.constituents),
                   config_.gcn_dropout, mode.train, mode.rng);
    enc.p_root = PathSequence(*enc.constituents, sentence.tree, PathReference::Root(),
                              config_.path_include_endpoints);
  } else {
    enc.p_root = PathWidthZeros(n);
  }
  ad::Tensor h = m_.backbone_a.Forward(ad::ConcatCols({enc.e, enc.p_root}),
                                       config_.dropout, mode.train, mode.rng);
  h = ad::Dropout(h, config_.dropout, mode.train, mode.rng);
  enc.a = ad::LayerNorm(ad::Add(h, enc.e), m_.ln_a_gain, m_.ln_a_bias);
  return enc;
}

const ad::Tensor& FrameParser::PredicatePath(SentenceEncoding* enc, int first) const {
  auto it = enc->p_cache.find(first);
  if (it != enc->p_cache.end()) return it->second;
  const Sentence& s = *enc->sentence;
  if (first < 0 || first >= s.size()) throw DataError("target index out of range");
  ad::Tensor p = enc->constituents
                     ? PathSequence(*enc->constituents, s.tree, PathReference::Token(first),
                                    config_.path_include_endpoints)
                     : PathWidthZeros(s.size());
  return enc->p_cache.emplace(first, p).first->second;
}

const ad::Tensor& FrameParser::PredicateBackbone(SentenceEncoding* enc, int first) const {
  auto it = enc->b_cache.find(first);
  if (it != enc->b_cache.end()) return it->second;
  const ad::Tensor& p = PredicatePath(enc, first);
  ad::Tensor h = m_.backbone_b.Forward(ad::ConcatCols({enc->e, p}), config_.dropout,
                                       enc->mode.train, enc->mode.rng);
  h = ad::Dropout(h, config_.dropout, enc->mode.train, enc->mode.rng);
  ad::Tensor b = ad::LayerNorm(ad::Add(h, enc->e), m_.ln_b_gain, m_.ln_b_bias);
  return enc->b_cache.emplace(first, b).first->second;
}

ad::Tensor FrameParser::TiEmissions(const SentenceEncoding& enc) const {
  return m_.ti_projection.Forward(enc.a);
}

ad::Tensor FrameParser::TiLoss(const SentenceEncoding& enc) const {
  std::vector<std::vector<int>> targets;
  for (const FrameAnnotation& a : enc.sentence->annotations) targets.push_back(a.target);
  const std::vector<int> gold = EncodeIobc(targets, enc.sentence->size());
  return SequenceNll(TiEmissions(enc), gold, m_.ti_crf,
                     config_.constrain_training ? &iobc_ : nullptr);
}

std::vector<std::vector<int>> FrameParser::TiPredict(const SentenceEncoding& enc) const {
  return DecodeIobc(Viterbi(TiEmissions(enc), m_.ti_crf, &iobc_).labels);
}

ad::Tensor FrameParser::TargetRepr(const SentenceEncoding& enc,
                                   const std::vector<int>& target) const {
  if (target.empty()) throw DataError("empty target index set");
  for (int i : target) {
    if (i < 0 || i >= enc.a.rows()) throw DataError("target index out of range");
  }
  return ad::SumRows(enc.a, target);
}

ad::Tensor FrameParser::FiLogits(const SentenceEncoding& enc, const std::string& lu,
                                 const std::vector<int>& target) const {
  auto mask = frame_penalties_.find(lu);
  if (mask == frame_penalties_.end()) {
    throw DataError("unknown lexical unit '" + lu + "'");
  }
  ad::Tensor h = TargetRepr(enc, target);
  const size_t hidden = m_.fi_layers.size() - 1;
  for (size_t i = 0; i < hidden; ++i) {
    h = ad::LeakyRelu(m_.fi_layers[i].Forward(h), config_.leaky_slope);
    h = ad::Dropout(h, config_.dropout, enc.mode.train, enc.mode.rng);
  }
  return ad::AddConstant(m_.fi_layers.back().Forward(h), mask->second);
}

ad::Tensor FrameParser::FiLoss(const SentenceEncoding& enc,
                               const FrameAnnotation& annotation) const {
  const int frame = vocab_.frames.Id(annotation.frame);
  ad::Tensor log_probs =
      ad::LogSoftmax(FiLogits(enc, annotation.lexical_unit, annotation.target));
  return ad::Scale(ad::Pick(log_probs, 0, frame), -1.0);
}

std::string FrameParser::FiPredict(const SentenceEncoding& enc, const std::string& lu,
                                   const std::vector<int>& target) const {
  return vocab_.frames.Str(ArgMax(FiLogits(enc, lu, target).values()));
}

PredicateRepr FrameParser::Predicate(const SentenceEncoding& enc, const std::string& lu,
                                     const std::string& frame,
                                     const std::vector<int>& target) const {
  PredicateRepr p;
  p.z = ad::ConcatCols({m_.lexical_units.Lookup({vocab_.lexical_units.Id(lu)}),
                        TargetRepr(enc, target),
                        m_.frames.Lookup({vocab_.frames.Id(frame)})});
  p.pr = ad::Dropout(ad::Tanh(ad::MatMul(p.z, m_.v1)), config_.dropout, enc.mode.train,
                     enc.mode.rng);
  return p;
}

ad::Tensor FrameParser::AiEmissions(SentenceEncoding* enc, const PredicateRepr& pred,
                                    const std::vector<int>& target) const {
  const ad::Tensor& b = PredicateBackbone(enc, FirstIndex(target));
  ad::Tensor pb = ad::Dropout(ad::Tanh(ad::MatMul(b, m_.v2)), config_.dropout,
                              enc->mode.train, enc->mode.rng);
  return m_.ai_bilinear.ScoreRows(pred.pr, pb);
}

ad::Tensor FrameParser::AiLoss(SentenceEncoding* enc,
                               const FrameAnnotation& annotation) const {
  PredicateRepr pred =
      Predicate(*enc, annotation.lexical_unit, annotation.frame, annotation.target);
  std::vector<Span> spans;
  for (const ElementSpan& e : annotation.elements) spans.push_back(e.span);
  const std::vector<int> gold = EncodeIob2(spans, enc->sentence->size());
  return SequenceNll(AiEmissions(enc, pred, annotation.target), gold, m_.ai_crf,
                     config_.constrain_training ? &iob2_ : nullptr);
}

std::vector<Span> FrameParser::AiPredict(SentenceEncoding* enc, const std::string& lu,
                                         const std::string& frame,
                                         const std::vector<int>& target) const {
  PredicateRepr pred = Predicate(*enc, lu, frame, target);
  return DecodeIob2(Viterbi(AiEmissions(enc, pred, target), m_.ai_crf, &iob2_).labels);
}

ad::Tensor FrameParser::AcEmissions(SentenceEncoding* enc, const PredicateRepr& pred,
                                    const std::vector<int>& target,
                                    const std::vector<Span>& spans) const {
  if (spans.empty()) throw DataError("argument classification needs spans");
  const ad::Tensor& b = PredicateBackbone(enc, FirstIndex(target));
  std::vector<std::vector<int>> groups;
  for (const Span& s : spans) {
    if (s.start < 0 || s.end >= b.rows() || s.start > s.end) {
      throw DataError("argument span out of range");
    }
    std::vector<int> rows;
    for (int i = s.start; i <= s.end; ++i) rows.push_back(i);
    groups.push_back(std::move(rows));
  }
  const int m = static_cast<int>(spans.size());
  ad::Tensor input =
      ad::ConcatCols({ad::GatherSum(b, groups), ad::RowSelect(pred.z, std::vector<int>(m, 0))});
  ad::Tensor q = ad::Dropout(ad::Tanh(ad::MatMul(input, m_.y)), config_.dropout,
                             enc->mode.train, enc->mode.rng);
  return m_.ac_output.Forward(q);
}

ad::Tensor FrameParser::AcLoss(SentenceEncoding* enc,
                               const FrameAnnotation& annotation) const {
  if (annotation.elements.empty()) return ad::Tensor::Scalar(0.0);
  PredicateRepr pred =
      Predicate(*enc, annotation.lexical_unit, annotation.frame, annotation.target);
  const std::vector<ElementSpan> elements = SortedElements(annotation);
  std::vector<Span> spans;
  std::vector<int> gold;
  for (const ElementSpan& e : elements) {
    spans.push_back(e.span);
    gold.push_back(vocab_.elements.Id(e.label));
  }
  const CrfConstraints constraints = ElementConstraintsFor(annotation.frame);
  return SequenceNll(AcEmissions(enc, pred, annotation.target, spans), gold, m_.ac_crf,
                     config_.constrain_training ? &constraints : nullptr);
}

std::vector<std::string> FrameParser::AcPredict(SentenceEncoding* enc,
                                                const std::string& lu,
                                                const std::string& frame,
                                                const std::vector<int>& target,
                                                const std::vector<Span>& spans) const {
  if (spans.empty()) return {};
  PredicateRepr pred = Predicate(*enc, lu, frame, target);
  const CrfConstraints constraints = ElementConstraintsFor(frame);
  std::vector<std::string> labels;
  for (int id : Viterbi(AcEmissions(enc, pred, target, spans), m_.ac_crf, &constraints).labels) {
    labels.push_back(vocab_.elements.Str(id));
  }
  return labels;
}

TaskLosses FrameParser::SentenceLoss(const Sentence& sentence, Task task,
                                     ForwardMode mode) const {
  SentenceEncoding enc = Encode(sentence, mode);
  TaskLosses out;
  const bool joint = task == Task::kJoint;
  out.ti = (joint || task == Task::kTi) ? TiLoss(enc) : ad::Tensor::Scalar(0.0);

  std::vector<ad::Tensor> fi, srl;
  for (const FrameAnnotation& a : sentence.annotations) {
    if (joint || task == Task::kFi) fi.push_back(FiLoss(enc, a));
    if (!joint && task != Task::kSrl) continue;
    PredicateRepr pred = Predicate(enc, a.lexical_unit, a.frame, a.target);
    std::vector<Span> spans;
    for (const ElementSpan& e : a.elements) spans.push_back(e.span);
    ad::Tensor term =
        SequenceNll(AiEmissions(&enc, pred, a.target), EncodeIob2(spans, sentence.size()),
                    m_.ai_crf, config_.constrain_training ? &iob2_ : nullptr);
    if (!a.elements.empty()) {
      const std::vector<ElementSpan> elements = SortedElements(a);
      std::vector<Span> sorted;
      std::vector<int> gold;
      for (const ElementSpan& e : elements) {
        sorted.push_back(e.span);
        gold.push_back(vocab_.elements.Id(e.label));
      }
      const CrfConstraints constraints = ElementConstraintsFor(a.frame);
      term = ad::Add(term, SequenceNll(AcEmissions(&enc, pred, a.target, sorted), gold,
                                       m_.ac_crf,
                                       config_.constrain_training ? &constraints : nullptr));
    }
    srl.push_back(term);
  }
  out.fi = MeanOf(fi);
  out.srl = MeanOf(srl);
  out.total = ad::Add(ad::Add(out.ti, out.fi), out.srl);
  return out;
}

TaskLosses FrameParser::BatchLoss(const std::vector<const Sentence*>& batch, Task task,
                                  ForwardMode mode) const {
  if (batch.empty()) throw DataError("empty batch");
  std::vector<ad::Tensor> ti, fi, srl;
  for (const Sentence* s : batch) {
    TaskLosses l = SentenceLoss(*s, task, mode);
    ti.push_back(l.ti);
    fi.push_back(l.fi);
    srl.push_back(l.srl);
  }
  TaskLosses out;
  out.ti = MeanOf(ti);
  out.fi = MeanOf(fi);
  out.srl = MeanOf(srl);
  out.total = ad::Add(ad::Add(out.ti, out.fi), out.srl);
  return out;
}

ad::Tensor FrameParser::TiBatchLoss(const std::vector<const Sentence*>& batch) const {
  return BatchLoss(batch, Task::kTi).ti;
}

ad::Tensor FrameParser::FiBatchLoss(const std::vector<const Sentence*>& batch) const {
  return BatchLoss(batch, Task::kFi).fi;
}

ad::Tensor FrameParser::SrlBatchLoss(const std::vector<const Sentence*>& batch) const {
  return BatchLoss(batch, Task::kSrl).srl;
}

ad::Tensor FrameParser::JointBatchLoss(const std::vector<const Sentence*>& batch) const {
  return BatchLoss(batch, Task::kJoint).total;
}

ParseResult FrameParser::Parse(const Sentence& sentence, GoldMode gold) const {
  ad::NoGradGuard no_grad;
  SentenceEncoding enc = Encode(sentence);
  ParseResult result;
  std::vector<FrameAnnotation> requests;
  if (gold == GoldMode::kNone) {
    for (std::vector<int>& target : TiPredict(enc)) {
      FrameAnnotation a;
      a.lexical_unit = LexicalUnitKey(sentence, target);
      a.target = std::move(target);
      if (!frame_penalties_.count(a.lexical_unit) ||
          !vocab_.lexical_units.Contains(a.lexical_unit)) {
        ++result.dropped_targets;
        continue;
      }
      requests.push_back(std::move(a));
    }
  } else {
    for (const FrameAnnotation& g : sentence.annotations) {
      FrameAnnotation a;
      a.target = g.target;
      a.lexical_unit = g.lexical_unit;
      if (gold == GoldMode::kTargetsAndFrames) a.frame = g.frame;
      requests.push_back(std::move(a));
    }
  }
  for (FrameAnnotation& a : requests) {
    if (a.frame.empty()) a.frame = FiPredict(enc, a.lexical_unit, a.target);
    PredicateRepr pred = Predicate(enc, a.lexical_unit, a.frame, a.target);
    const std::vector<Span> spans = DecodeIob2(
        Viterbi(AiEmissions(&enc, pred, a.target), m_.ai_crf, &iob2_).labels);
    if (!spans.empty()) {
      const CrfConstraints constraints = ElementConstraintsFor(a.frame);
      const std::vector<int> labels =
          Viterbi(AcEmissions(&enc, pred, a.target, spans), m_.ac_crf, &constraints).labels;
      for (size_t w = 0; w < spans.size(); ++w) {
        a.elements.push_back({spans[w], vocab_.elements.Str(labels[w])});
      }
    }
    result.annotations.push_back(std::move(a));
  }
  return result;
}

std::string FrameParser::ToJson() const {
  ordered_json j;
  j["format"] = "frameparse-checkpoint";
  j["version"] = 1;
  j["config"] = ModelConfigToJson(config_);
  ordered_json v;
  v["tokens"] = VocabularyToJson(vocab_.tokens);
  v["pos"] = VocabularyToJson(vocab_.pos);
  v["constituents"] = VocabularyToJson(vocab_.constituents);
  v["lexical_units"] = VocabularyToJson(vocab_.lexical_units);
  v["frames"] = VocabularyToJson(vocab_.frames);
  v["elements"] = VocabularyToJson(vocab_.elements);
  j["vocab"] = v;
  ordered_json o;
  o["lu_to_frames"] = ontology_.lu_to_frames;
  o["frame_to_elements"] = ontology_.frame_to_elements;
  j["ontology"] = o;
  ordered_json params = ordered_json::object();
  for (const Parameter& p : params_.params()) {
    ordered_json entry;
    entry["shape"] = {p.tensor.rows(), p.tensor.cols()};
    entry["values"] = p.tensor.values();
    params[p.name] = std::move(entry);
  }
  j["params"] = std::move(params);
  return j.dump();
}

void FrameParser::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint " + path);
  out << ToJson() << '\n';
  if (!out) throw DataError("failed writing checkpoint " + path);
}

FrameParser FrameParser::FromJson(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format") != "frameparse-checkpoint") {
      throw DataError("not a frameparse checkpoint");
    }
    ModelConfig config = ModelConfigFromJson(j.at("config"));
    const auto& v = j.at("vocab");
    Vocab vocab;
    vocab.tokens = VocabularyFromJson(v.at("tokens"), "token");
    vocab.pos = VocabularyFromJson(v.at("pos"), "POS tag");
    vocab.constituents = VocabularyFromJson(v.at("constituents"), "constituent label");
    vocab.lexical_units = VocabularyFromJson(v.at("lexical_units"), "lexical unit");
    vocab.frames = VocabularyFromJson(v.at("frames"), "frame");
    vocab.elements = VocabularyFromJson(v.at("elements"), "frame element");
    Ontology ontology;
    ontology.lu_to_frames = j.at("ontology")
                                .at("lu_to_frames")
                                .get<std::map<std::string, std::set<std::string>>>();
    ontology.frame_to_elements = j.at("ontology")
                                     .at("frame_to_elements")
                                     .get<std::map<std::string, std::set<std::string>>>();
    FrameParser parser(std::move(config), std::move(vocab), std::move(ontology), 0);
    const auto& params = j.at("params");
    if (params.size() != parser.params_.params().size()) {
      throw DataError("checkpoint has " + std::to_string(params.size()) +
                      " parameters, model expects " +
                      std::to_string(parser.params_.params().size()));
    }
    for (Parameter& p : parser.params_.params()) {
      if (!params.contains(p.name)) throw DataError("checkpoint lacks parameter " + p.name);
      const auto& entry = params.at(p.name);
      const auto shape = entry.at("shape").get<std::vector<int>>();
      if (shape.size() != 2 || shape[0] != p.tensor.rows() || shape[1] != p.tensor.cols()) {
        throw DataError("checkpoint shape mismatch for " + p.name);
      }
      auto values = entry.at("values").get<std::vector<double>>();
      if (values.size() != p.tensor.size()) {
        throw DataError("checkpoint value count mismatch for " + p.name);
      }
      p.tensor.mutable_values() = std::move(values);
    }
    return parser;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint parse error: ") + e.what());
  }
}

FrameParser FrameParser::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJson(buffer.str());
}

}  // namespace frameparse
