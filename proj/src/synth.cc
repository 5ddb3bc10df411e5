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

#include "frameparse/synth.h"

#include <algorithm>
#include <map>
#include <random>
#include <string>

#include "frameparse/errors.h"

namespace frameparse {
namespace {

struct GNode {
  std::string label;
  std::string word;  // set on preterminals
  std::vector<GNode> kids;
  // (annotation, element) pairs whose span is this constituent.
  std::vector<std::pair<int, std::string>> roles;
  int target = -1;  // annotation whose target includes this word
};

GNode Leaf(const std::string& tag, const std::string& word) {
  GNode n;
  n.label = tag;
  n.word = word;
  return n;
}

GNode Phrase(const std::string& label, std::vector<GNode> kids) {
  GNode n;
  n.label = label;
  n.kids = std::move(kids);
  return n;
}

GNode& Role(GNode& n, int annotation, const std::string& element) {
  n.roles.emplace_back(annotation, element);
  return n;
}

class Generator {
 public:
  explicit Generator(uint64_t seed) : rng_(seed) {}

  Sentence Next(int index);

 private:
  size_t Pick(size_t n) { return static_cast<size_t>(rng_() % n); }
  bool Coin(double p) { return static_cast<double>(rng_() % 1000) < p * 1000; }
  template <typename T>
  const T& Choose(const std::vector<T>& v) { return v[Pick(v.size())]; }

  GNode Adjective();
  GNode Subject(bool allow_adjective);
  GNode Object(const std::vector<std::string>& nouns, bool allow_adjective);
  GNode Simple(const std::string& prep, const std::vector<std::string>& nouns);
  GNode Verb(const std::string& word, int annotation);

  GNode Transitive(int a, std::map<int, std::pair<std::string, std::string>>* frames);
  GNode Motion(int a, bool embedded,
               std::map<int, std::pair<std::string, std::string>>* frames);
  GNode Lead(int a, std::map<int, std::pair<std::string, std::string>>* frames);
  GNode Take(int a, std::map<int, std::pair<std::string, std::string>>* frames);
  GNode Report(std::map<int, std::pair<std::string, std::string>>* frames);

  std::mt19937_64 rng_;
};

const std::vector<std::string> kNames = {"John", "Mary", "Alice", "Bob", "Carol"};
const std::vector<std::string> kPronouns = {"he", "she", "they"};
const std::vector<std::string> kPeople = {"man", "woman", "boy", "girl", "dog"};
const std::vector<std::string> kPeoplePlural = {"men", "women", "boys", "girls", "dogs"};
const std::vector<std::string> kThings = {"man", "woman", "dog", "bread", "box",
                                          "rope", "tree", "car"};
const std::vector<std::string> kTools = {"knife", "telescope", "stick", "hammer", "rope"};
const std::vector<std::string> kPlaces = {"park", "house", "river", "store", "school"};
const std::vector<std::string> kGroups = {"team", "company", "group", "army"};
const std::vector<std::string> kAdjectives = {"big", "old", "small", "red"};
const std::vector<std::string> kAdverbs = {"quickly", "slowly", "carefully"};

GNode Generator::Adjective() {
  std::vector<GNode> kids;
  if (Coin(0.3)) kids.push_back(Leaf("RB", "very"));
  kids.push_back(Leaf("JJ", Choose(kAdjectives)));
  return Phrase("ADJP", std::move(kids));
}

GNode Generator::Subject(bool allow_adjective) {
  switch (Pick(3)) {
    case 0: return Phrase("NP", {Leaf("NNP", Choose(kNames))});
    case 1: return Phrase("NP", {Leaf("PRP", Choose(kPronouns))});
    default: {
      std::vector<GNode> kids = {Leaf("DT", "the")};
      if (allow_adjective && Coin(0.3)) kids.push_back(Adjective());
      const size_t noun = Pick(kPeople.size());
      if (Coin(0.2)) {
        kids.push_back(Leaf("NNS", kPeoplePlural[noun]));
      } else {
        kids.push_back(Leaf("NN", kPeople[noun]));
      }
      return Phrase("NP", std::move(kids));
    }
  }
}

GNode Generator::Object(const std::vector<std::string>& nouns, bool allow_adjective) {
  std::vector<GNode> kids = {Leaf("DT", Coin(0.7) ? "the" : "a")};
  if (allow_adjective && Coin(0.3)) kids.push_back(Adjective());
  kids.push_back(Leaf("NN", Choose(nouns)));
  return Phrase("NP", std::move(kids));
}

GNode Generator::Simple(const std::string& prep, const std::vector<std::string>& nouns) {
  return Phrase("PP", {Leaf("IN", prep),
                       Phrase("NP", {Leaf("DT", "the"), Leaf("NN", Choose(nouns))})});
}

GNode Generator::Verb(const std::string& word, int annotation) {
  GNode v = Leaf("VBD", word);
  v.target = annotation;
  return v;
}

// Perception, Cutting or Impact, with an ambiguous "with" phrase.
GNode Generator::Transitive(int a, std::map<int, std::pair<std::string, std::string>>* frames) {
  struct Kind {
    std::vector<std::string> verbs;
    std::string frame, agent, patient;
  };
  static const std::vector<Kind> kKinds = {
      {{"saw", "watched"}, "Perception", "Perceiver", "Phenomenon"},
      {{"cut"}, "Cutting", "Agent", "Item"},
      {{"hit"}, "Impact", "Agent", "Impactee"},
  };
  const Kind& k = Choose(kKinds);
  const std::string verb = Choose(k.verbs);
  (*frames)[a] = {verb + ".v", k.frame};
  GNode subject = Subject(true);
  Role(subject, a, k.agent);
  std::vector<GNode> vp = {Verb(verb, a)};
  if (Coin(0.85)) {
    GNode pp = Simple("with", kTools);
    if (Coin(0.5)) {
      GNode object = Object(kThings, true);
      Role(pp, a, "Instrument");
      vp.push_back(Role(object, a, k.patient));
      vp.push_back(std::move(pp));
    } else {
      GNode object = Phrase("NP", {Object(kThings, true), std::move(pp)});
      vp.push_back(Role(object, a, k.patient));
    }
  } else {
    GNode object = Object(kThings, true);
    vp.push_back(Role(object, a, k.patient));
  }
  return Phrase("S", {std::move(subject), Phrase("VP", std::move(vp))});
}

GNode Generator::Motion(int a, bool embedded,
                        std::map<int, std::pair<std::string, std::string>>* frames) {
  const std::string verb = Coin(0.5) ? "walked" : "ran";
  (*frames)[a] = {verb + ".v", "Self_motion"};
  GNode subject = Subject(!embedded);
  Role(subject, a, "Self_mover");
  std::vector<GNode> vp = {Verb(verb, a)};
  if (!embedded) {
    const bool manner = Coin(0.5);
    const bool goal = !manner || Coin(0.5);
    if (manner) {
      GNode adv = Phrase("ADVP", {Leaf("RB", Choose(kAdverbs))});
      vp.push_back(Role(adv, a, "Manner"));
    }
    if (goal) {
      GNode pp = Simple("to", kPlaces);
      vp.push_back(Role(pp, a, "Goal"));
    }
  }
  return Phrase("S", {std::move(subject), Phrase("VP", std::move(vp))});
}

GNode Generator::Lead(int a, std::map<int, std::pair<std::string, std::string>>* frames) {
  const std::string verb = Coin(0.5) ? "led" : "ran";
  (*frames)[a] = {verb + ".v", "Leadership"};
  GNode subject = Subject(true);
  Role(subject, a, "Leader");
  GNode object = Object(kGroups, true);
  Role(object, a, "Governed");
  return Phrase("S", {std::move(subject),
                      Phrase("VP", {Verb(verb, a), std::move(object)})});
}

GNode Generator::Take(int a, std::map<int, std::pair<std::string, std::string>>* frames) {
  (*frames)[a] = {"picked up.v", "Taking"};
  GNode subject = Subject(true);
  Role(subject, a, "Agent");
  GNode particle = Leaf("RP", "up");
  particle.target = a;
  GNode object = Object(kThings, true);
  Role(object, a, "Theme");
  std::vector<GNode> vp = {Verb("picked", a)};
  if (Coin(0.5)) {
    vp.push_back(Phrase("PRT", {std::move(particle)}));
    vp.push_back(std::move(object));
  } else {
    vp.push_back(std::move(object));
    vp.push_back(Phrase("PRT", {std::move(particle)}));
  }
  if (Coin(0.4)) {
    GNode pp = Simple("from", kPlaces);
    vp.push_back(Role(pp, a, "Source"));
  }
  return Phrase("S", {std::move(subject), Phrase("VP", std::move(vp))});
}

// "X said/thought that Y walked/ran": two targets.
GNode Generator::Report(std::map<int, std::pair<std::string, std::string>>* frames) {
  const bool said = Coin(0.5);
  const std::string verb = said ? "said" : "thought";
  (*frames)[0] = {verb + ".v", said ? "Statement" : "Opinion"};
  GNode subject = Subject(true);
  Role(subject, 0, said ? "Speaker" : "Cognizer");
  GNode clause = Phrase("SBAR", {Leaf("IN", "that"), Motion(1, true, frames)});
  Role(clause, 0, said ? "Message" : "Opinion");
  return Phrase("S", {std::move(subject),
                      Phrase("VP", {Verb(verb, 0), std::move(clause)})});
}

struct Flattened {
  std::vector<std::string> tokens, pos;
  std::map<int, std::vector<int>> targets;
  std::map<int, std::vector<ElementSpan>> elements;
};

void Flatten(const GNode& n, Flattened* out, std::string* literal) {
  *literal += "(" + n.label;
  const int start = static_cast<int>(out->tokens.size());
  if (!n.word.empty()) {
    if (n.target >= 0) out->targets[n.target].push_back(start);
    out->tokens.push_back(n.word);
    out->pos.push_back(n.label);
    *literal += " " + n.word;
  }
  for (const GNode& k : n.kids) {
    *literal += " ";
    Flatten(k, out, literal);
  }
  *literal += ")";
  const int end = static_cast<int>(out->tokens.size()) - 1;
  for (const auto& [annotation, element] : n.roles) {
    out->elements[annotation].push_back({{start, end}, element});
  }
}

Sentence Generator::Next(int index) {
  std::map<int, std::pair<std::string, std::string>> frames;
  GNode root;
  const size_t r = Pick(20);
  if (r < 9) {
    root = Transitive(0, &frames);
  } else if (r < 12) {
    root = Motion(0, false, &frames);
  } else if (r < 15) {
    root = Lead(0, &frames);
  } else if (r < 17) {
    root = Take(0, &frames);
  } else {
    root = Report(&frames);
  }
  Flattened flat;
  Sentence s;
  Flatten(root, &flat, &s.tree_literal);
  s.tokens = flat.tokens;
  s.pos_tags = flat.pos;
  for (const auto& [a, lu_frame] : frames) {
    FrameAnnotation ann;
    ann.target = flat.targets.at(a);
    ann.lexical_unit = lu_frame.first;
    ann.frame = lu_frame.second;
    ann.elements = flat.elements[a];
    std::sort(ann.elements.begin(), ann.elements.end(),
              [](const ElementSpan& x, const ElementSpan& y) { return x.span < y.span; });
    s.annotations.push_back(std::move(ann));
  }
  ValidateSentence(&s, "synthetic sentence " + std::to_string(index));
  return s;
}

}  // namespace

Ontology SynthOntology() {
  Ontology o;
  o.lu_to_frames = {
      {"saw.v", {"Perception"}},       {"watched.v", {"Perception"}},
      {"cut.v", {"Cutting"}},          {"hit.v", {"Impact"}},
      {"walked.v", {"Self_motion"}},   {"ran.v", {"Self_motion", "Leadership"}},
      {"led.v", {"Leadership"}},       {"picked up.v", {"Taking"}},
      {"said.v", {"Statement"}},       {"thought.v", {"Opinion"}},
  };
  o.frame_to_elements = {
      {"Perception", {"Perceiver", "Phenomenon", "Instrument"}},
      {"Cutting", {"Agent", "Item", "Instrument"}},
      {"Impact", {"Agent", "Impactee", "Instrument"}},
      {"Self_motion", {"Self_mover", "Goal", "Manner"}},
      {"Leadership", {"Leader", "Governed"}},
      {"Taking", {"Agent", "Theme", "Source"}},
      {"Statement", {"Speaker", "Message"}},
      {"Opinion", {"Cognizer", "Opinion"}},
  };
  o.Validate();
  return o;
}

std::vector<Sentence> GenerateCorpus(uint64_t seed, int num_sentences) {
  if (num_sentences < 1) throw ConfigError("synthetic corpus needs at least one sentence");
  Generator g(seed);
  std::vector<Sentence> corpus;
  corpus.reserve(num_sentences);
  for (int i = 0; i < num_sentences; ++i) corpus.push_back(g.Next(i));
  return corpus;
}

}  // namespace frameparse
