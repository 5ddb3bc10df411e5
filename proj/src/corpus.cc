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

#include "frameparse/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "frameparse/errors.h"
#include "json.hpp"

namespace frameparse {
namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> StringList(const nlohmann::json& j,
                                    const char* field) {
  if (!j.contains(field) || !j[field].is_array()) {
    throw DataError(std::string("missing array field '") + field + "'");
  }
  return j[field].get<std::vector<std::string>>();
}

std::string StringField(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_string()) {
    throw DataError(std::string("missing string field '") + field + "'");
  }
  return j[field].get<std::string>();
}

}  // namespace

void ValidateSentence(Sentence* s, const std::string& record) {
  auto fail = [&](const std::string& what) {
    throw DataError(record + ": " + what);
  };
  const int n = s->size();
  if (n < 1) fail("sentence has no tokens");
  if (static_cast<int>(s->pos_tags.size()) != n) {
    fail("token/POS length mismatch");
  }
  try {
    s->tree = ParseBracketed(s->tree_literal);
  } catch (const DataError& e) {
    fail(std::string("bad tree: ") + e.what());
  }
  if (s->tree.num_tokens() != n) {
    fail("tree has " + std::to_string(s->tree.num_tokens()) +
         " preterminals for " + std::to_string(n) + " tokens");
  }
  if (s->tree.words() != s->tokens) fail("tree words differ from tokens");
  if (s->tree.pos_tags() != s->pos_tags) fail("tree preterminals differ from POS tags");
  for (size_t a = 0; a < s->annotations.size(); ++a) {
    const FrameAnnotation& ann = s->annotations[a];
    const std::string where = "annotation " + std::to_string(a) + ": ";
    if (ann.target.empty()) fail(where + "empty target");
    for (size_t i = 0; i < ann.target.size(); ++i) {
      if (ann.target[i] < 0 || ann.target[i] >= n) {
        fail(where + "target index out of range");
      }
      if (i > 0 && ann.target[i] <= ann.target[i - 1]) {
        fail(where + "target indices not strictly increasing");
      }
    }
    if (ann.lexical_unit.empty() || ann.frame.empty()) {
      fail(where + "missing lexical unit or frame");
    }
    std::vector<Span> spans;
    for (const ElementSpan& e : ann.elements) {
      if (e.span.start < 0 || e.span.end >= n || e.span.start > e.span.end) {
        fail(where + "element span [" + std::to_string(e.span.start) + "," +
             std::to_string(e.span.end) + "] outside sentence of length " +
             std::to_string(n));
      }
      if (e.label.empty()) fail(where + "element without label");
      spans.push_back(e.span);
    }
    std::sort(spans.begin(), spans.end());
    for (size_t i = 1; i < spans.size(); ++i) {
      if (spans[i].start <= spans[i - 1].end) {
        fail(where + "overlapping element spans");
      }
    }
  }
}

Sentence SentenceFromJson(const std::string& line, const std::string& record) {
  Sentence s;
  try {
    nlohmann::json j = nlohmann::json::parse(line);
    if (!j.is_object()) throw DataError("record is not a JSON object");
    s.tokens = StringList(j, "tokens");
    s.pos_tags = StringList(j, "pos");
    s.tree_literal = StringField(j, "tree");
    if (j.contains("annotations")) {
      for (const auto& a : j["annotations"]) {
        FrameAnnotation ann;
        ann.target = a.at("target").get<std::vector<int>>();
        ann.lexical_unit = StringField(a, "lu");
        ann.frame = StringField(a, "frame");
        if (a.contains("elements")) {
          for (const auto& e : a["elements"]) {
            auto span = e.at("span").get<std::vector<int>>();
            if (span.size() != 2) throw DataError("span must have two ends");
            ann.elements.push_back(
                {Span{span[0], span[1]}, StringField(e, "label")});
          }
        }
        s.annotations.push_back(std::move(ann));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(record + ": parse error: " + e.what());
  } catch (const DataError& e) {
    throw DataError(record + ": parse error: " + e.what());
  }
  ValidateSentence(&s, record);
  return s;
}

std::string SentenceToJson(const Sentence& s) {
  ordered_json j;
  j["tokens"] = s.tokens;
  j["pos"] = s.pos_tags;
  j["tree"] = s.tree_literal;
  j["annotations"] = ordered_json::array();
  for (const FrameAnnotation& ann : s.annotations) {
    ordered_json a;
    a["target"] = ann.target;
    a["lu"] = ann.lexical_unit;
    a["frame"] = ann.frame;
    a["elements"] = ordered_json::array();
    for (const ElementSpan& e : ann.elements) {
      a["elements"].push_back(
          {{"span", {e.span.start, e.span.end}}, {"label", e.label}});
    }
    j["annotations"].push_back(std::move(a));
  }
  return j.dump();
}

std::vector<Sentence> ReadCorpus(std::istream& in) {
  std::vector<Sentence> corpus;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    corpus.push_back(SentenceFromJson(line, "line " + std::to_string(line_no)));
  }
  return corpus;
}

std::vector<Sentence> LoadCorpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus " + path);
  try {
    return ReadCorpus(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void WriteCorpus(const std::vector<Sentence>& corpus, std::ostream& out) {
  for (const Sentence& s : corpus) out << SentenceToJson(s) << '\n';
}

void SaveCorpus(const std::vector<Sentence>& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  WriteCorpus(corpus, out);
}

void Ontology::Validate() const {
  for (const auto& [lu, frames] : lu_to_frames) {
    if (frames.empty()) throw DataError("lexical unit '" + lu + "' has no frames");
    for (const auto& f : frames) {
      if (!frame_to_elements.count(f)) {
        throw DataError("frame '" + f + "' of '" + lu +
                        "' has no frame-element entry");
      }
    }
  }
  for (const auto& [frame, elements] : frame_to_elements) {
    if (elements.empty()) {
      throw DataError("frame '" + frame + "' has no frame elements");
    }
  }
}

Ontology ReadOntology(std::istream& in) {
  Ontology o;
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    o.lu_to_frames =
        j.at("lu_to_frames").get<std::map<std::string, std::set<std::string>>>();
    o.frame_to_elements = j.at("frame_to_elements")
                              .get<std::map<std::string, std::set<std::string>>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("ontology parse error: ") + e.what());
  }
  o.Validate();
  return o;
}

Ontology LoadOntology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ontology " + path);
  return ReadOntology(in);
}

void SaveOntology(const Ontology& o, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  ordered_json j;
  j["lu_to_frames"] = o.lu_to_frames;
  j["frame_to_elements"] = o.frame_to_elements;
  out << j.dump(2) << '\n';
}

Vocabulary Vocabulary::WithUnknown(const std::string& unk) {
  Vocabulary v;
  v.Add(unk);
  v.has_unknown_ = true;
  return v;
}

Vocabulary Vocabulary::FromStrings(const std::vector<std::string>& strings,
                                   bool has_unknown) {
  Vocabulary v;
  for (const auto& s : strings) v.Add(s);
  v.has_unknown_ = has_unknown;
  return v;
}

int Vocabulary::Add(const std::string& s) {
  auto it = ids_.find(s);
  if (it != ids_.end()) return it->second;
  int id = size();
  strings_.push_back(s);
  ids_.emplace(s, id);
  return id;
}

int Vocabulary::Id(const std::string& s) const {
  auto it = ids_.find(s);
  if (it == ids_.end()) {
    throw DataError("unknown " + (name.empty() ? std::string("symbol") : name) +
                    " '" + s + "'");
  }
  return it->second;
}

int Vocabulary::IdOrUnknown(const std::string& s) const {
  auto it = ids_.find(s);
  if (it != ids_.end()) return it->second;
  if (!has_unknown_) return Id(s);
  return 0;
}

const std::string& Vocabulary::Str(int id) const {
  if (id < 0 || id >= size()) {
    throw DataError("id " + std::to_string(id) + " out of range");
  }
  return strings_[id];
}

Vocab Vocab::Build(const std::vector<Sentence>& training,
                   const Ontology& ontology) {
  Vocab v;
  v.tokens = Vocabulary::WithUnknown();
  v.tokens.name = "token";
  v.pos.name = "POS tag";
  v.constituents.name = "constituent label";
  v.lexical_units.name = "lexical unit";
  v.frames.name = "frame";
  v.elements.name = "frame element";
  for (const Sentence& s : training) {
    for (const auto& t : s.tokens) v.tokens.Add(t);
    for (const auto& p : s.pos_tags) v.pos.Add(p);
    for (const Node& n : s.tree.nodes()) v.constituents.Add(n.label);
  }
  std::set<std::string> elements;
  for (const auto& [lu, frames] : ontology.lu_to_frames) v.lexical_units.Add(lu);
  for (const auto& [frame, fes] : ontology.frame_to_elements) {
    v.frames.Add(frame);
    elements.insert(fes.begin(), fes.end());
  }
  for (const auto& e : elements) v.elements.Add(e);
  return v;
}

std::string IobcName(int label) {
  static const char* kNames[] = {"B-Lu", "I-Lu", "C-Lu", "O"};
  return kNames[label];
}

std::string Iob2Name(int label) {
  static const char* kNames[] = {"B", "I", "O"};
  return kNames[label];
}

std::vector<int> EncodeIobc(const std::vector<std::vector<int>>& targets,
                            int n) {
  std::vector<int> labels(n, kOLu);
  std::vector<int> owner(n, -1);
  for (size_t t = 0; t < targets.size(); ++t) {
    std::vector<int> idx = targets[t];
    std::sort(idx.begin(), idx.end());
    if (idx.empty()) throw DataError("empty target set");
    for (size_t k = 0; k < idx.size(); ++k) {
      int i = idx[k];
      if (i < 0 || i >= n) throw DataError("target index out of range");
      if (owner[i] >= 0) throw DataError("overlapping target sets");
      owner[i] = static_cast<int>(t);
      if (k == 0) {
        labels[i] = kBLu;
      } else {
        labels[i] = idx[k - 1] == i - 1 ? kILu : kCLu;
      }
    }
  }
  // Each continuation must resolve to the most recently started target.
  int latest = -1;
  for (int i = 0; i < n; ++i) {
    if (labels[i] == kBLu) latest = owner[i];
    if (labels[i] == kCLu && owner[i] != latest) {
      throw DataError("interleaved discontinuous targets cannot be encoded");
    }
  }
  return labels;
}

std::vector<std::vector<int>> DecodeIobc(const std::vector<int>& labels) {
  std::vector<std::vector<int>> targets;
  int current = -1;  // target of the previous token, -1 after O
  int latest = -1;   // most recently started target
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    int l = labels[i];
    bool open_new = l == kBLu || (l == kILu && current < 0) ||
                    (l == kCLu && latest < 0);
    if (open_new) {
      targets.push_back({i});
      latest = current = static_cast<int>(targets.size()) - 1;
    } else if (l == kILu) {
      targets[current].push_back(i);
    } else if (l == kCLu) {
      targets[latest].push_back(i);
      current = latest;
    } else {
      current = -1;
    }
  }
  return targets;
}

std::vector<int> EncodeIob2(const std::vector<Span>& spans, int n) {
  std::vector<int> labels(n, kO);
  for (const Span& s : spans) {
    if (s.start < 0 || s.end >= n || s.start > s.end) {
      throw DataError("span out of range");
    }
    for (int i = s.start; i <= s.end; ++i) {
      if (labels[i] != kO) throw DataError("overlapping spans");
      labels[i] = i == s.start ? kB : kI;
    }
  }
  return labels;
}

std::vector<Span> DecodeIob2(const std::vector<int>& labels) {
  std::vector<Span> spans;
  bool open = false;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    if (labels[i] == kB || (labels[i] == kI && !open)) {
      spans.push_back({i, i});
      open = true;
    } else if (labels[i] == kI) {
      spans.back().end = i;
    } else {
      open = false;
    }
  }
  return spans;
}

std::vector<bool> FrameMask(const Ontology& ontology, const Vocab& vocab,
                            const std::string& lexical_unit) {
  auto it = ontology.lu_to_frames.find(lexical_unit);
  if (it == ontology.lu_to_frames.end()) {
    throw DataError("unknown lexical unit '" + lexical_unit + "'");
  }
  std::vector<bool> mask(vocab.frames.size(), false);
  for (const auto& f : it->second) mask[vocab.frames.Id(f)] = true;
  return mask;
}

std::vector<bool> ElementMask(const Ontology& ontology, const Vocab& vocab,
                              const std::string& frame) {
  auto it = ontology.frame_to_elements.find(frame);
  if (it == ontology.frame_to_elements.end()) {
    throw DataError("unknown frame '" + frame + "'");
  }
  std::vector<bool> mask(vocab.elements.size(), false);
  for (const auto& e : it->second) mask[vocab.elements.Id(e)] = true;
  return mask;
}

}  // namespace frameparse
