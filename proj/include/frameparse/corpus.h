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

#ifndef FRAMEPARSE_CORPUS_H_
#define FRAMEPARSE_CORPUS_H_

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "frameparse/syntax.h"

namespace frameparse {

// Inclusive token range.
struct Span {
  int start = 0;
  int end = 0;

  int length() const { return end - start + 1; }
  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

struct ElementSpan {
  Span span;
  std::string label;

  bool operator==(const ElementSpan&) const = default;
};

// One frame evoked in a sentence: the (possibly discontinuous) target, its
// lexical unit and frame, and the labelled frame-element spans.
struct FrameAnnotation {
  std::vector<int> target;
  std::string lexical_unit;
  std::string frame;
  std::vector<ElementSpan> elements;

  bool operator==(const FrameAnnotation&) const = default;
};

struct Sentence {
  std::vector<std::string> tokens;
  std::vector<std::string> pos_tags;
  std::string tree_literal;
  std::vector<FrameAnnotation> annotations;
  // Parsed form of tree_literal, filled in by ValidateSentence().
  ConstTree tree;

  int size() const { return static_cast<int>(tokens.size()); }
};

// Checks every Sentence/FrameAnnotation invariant and parses the tree.
// Throws DataError naming `record` on the first violation.
void ValidateSentence(Sentence* sentence, const std::string& record);

// JSON Lines corpus, one sentence per line. Blank lines are skipped.
std::vector<Sentence> ReadCorpus(std::istream& in);
std::vector<Sentence> LoadCorpus(const std::string& path);
void WriteCorpus(const std::vector<Sentence>& corpus, std::ostream& out);
void SaveCorpus(const std::vector<Sentence>& corpus, const std::string& path);

std::string SentenceToJson(const Sentence& sentence);
Sentence SentenceFromJson(const std::string& line, const std::string& record);

struct Ontology {
  std::map<std::string, std::set<std::string>> lu_to_frames;
  std::map<std::string, std::set<std::string>> frame_to_elements;

  void Validate() const;
  bool operator==(const Ontology&) const = default;
};

Ontology LoadOntology(const std::string& path);
Ontology ReadOntology(std::istream& in);
void SaveOntology(const Ontology& ontology, const std::string& path);

// Dense string <-> id map. Ids are assigned in insertion order.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Vocabulary whose id 0 is reserved for unknown strings.
  static Vocabulary WithUnknown(const std::string& unk = "<unk>");

  int Add(const std::string& s);
  bool Contains(const std::string& s) const { return ids_.count(s) > 0; }
  // Throws DataError for unknown strings.
  int Id(const std::string& s) const;
  // Falls back to the reserved unknown id; throws if none is reserved.
  int IdOrUnknown(const std::string& s) const;
  const std::string& Str(int id) const;
  int size() const { return static_cast<int>(strings_.size()); }
  bool has_unknown() const { return has_unknown_; }
  const std::vector<std::string>& strings() const { return strings_; }

  static Vocabulary FromStrings(const std::vector<std::string>& strings,
                                bool has_unknown);

  std::string name;

 private:
  std::vector<std::string> strings_;
  std::unordered_map<std::string, int> ids_;
  bool has_unknown_ = false;
};

struct Vocab {
  Vocabulary tokens;
  Vocabulary pos;
  Vocabulary constituents;
  Vocabulary lexical_units;
  Vocabulary frames;
  Vocabulary elements;

  // Tokens, POS tags and constituent labels come from the training corpus;
  // lexical units, frames and frame elements from the ontology (sorted).
  static Vocab Build(const std::vector<Sentence>& training,
                     const Ontology& ontology);
};

// Target identification labels.
enum IobcLabel : int { kBLu = 0, kILu = 1, kCLu = 2, kOLu = 3 };
inline constexpr int kNumIobcLabels = 4;
// Argument identification labels.
enum Iob2Label : int { kB = 0, kI = 1, kO = 2 };
inline constexpr int kNumIob2Labels = 3;

std::string IobcName(int label);
std::string Iob2Name(int label);

// Encodes target index sets as B-Lu/I-Lu/C-Lu/O. Throws DataError on
// out-of-range indices, overlapping sets, or interleavings that the decoder
// could not recover (a continuation must belong to the most recently
// started target).
std::vector<int> EncodeIobc(const std::vector<std::vector<int>>& targets,
                            int n);
// Total decoder: stray I-Lu opens a new target, C-Lu joins the most recently
// started target (or opens one when none exists). Targets are returned in
// order of their first index.
std::vector<std::vector<int>> DecodeIobc(const std::vector<int>& labels);

std::vector<int> EncodeIob2(const std::vector<Span>& spans, int n);
// A span opens at B (or a stray I) and extends over following I labels.
std::vector<Span> DecodeIob2(const std::vector<int>& labels);

// True exactly on the frames the lexical unit may evoke.
std::vector<bool> FrameMask(const Ontology& ontology, const Vocab& vocab,
                            const std::string& lexical_unit);
// True exactly on the frame elements of the frame.
std::vector<bool> ElementMask(const Ontology& ontology, const Vocab& vocab,
                              const std::string& frame);

}  // namespace frameparse

#endif  // FRAMEPARSE_CORPUS_H_
