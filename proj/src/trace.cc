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

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "frameparse/errors.h"

namespace frameparse {
namespace {

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

void Matrix(std::ostringstream& out, const std::string& name, const ad::Tensor& t) {
  out << name << " shape " << t.rows() << "x" << t.cols() << "\n";
  for (int r = 0; r < t.rows(); ++r) {
    out << "  [" << r << "]";
    for (int c = 0; c < t.cols(); ++c) out << ' ' << Num(t.at(r, c));
    out << "\n";
  }
}

std::string Labels(const ConstTree& tree, const std::vector<int>& nodes) {
  std::string s;
  for (int id : nodes) {
    if (!s.empty()) s += ' ';
    s += tree.node(id).label;
  }
  return s;
}

void Paths(std::ostringstream& out, const FrameParser& parser, const Sentence& s,
           int reference_node) {
  const ConstTree& tree = s.tree;
  for (int i = 0; i < s.size(); ++i) {
    const int node = TokenNode(tree, i);
    std::vector<int> path =
        PathNodes(tree, node, reference_node, parser.config().path_include_endpoints);
    out << "  token " << i << " " << s.tokens[i] << ": " << Labels(tree, path) << "\n";
  }
}

}  // namespace

std::string GenerateTrace(const FrameParser& parser, const Sentence& sentence,
                          std::optional<int> reference) {
  ad::NoGradGuard no_grad;
  const ConstTree& tree = sentence.tree;
  std::ostringstream out;
  out << "== sentence\n";
  out << "tokens:";
  for (const auto& t : sentence.tokens) out << ' ' << t;
  out << "\npos:";
  for (const auto& p : sentence.pos_tags) out << ' ' << p;
  out << "\ntree: " << Serialize(tree) << "\n";

  out << "== nodes (" << tree.size() << ")\n";
  for (const Node& n : tree.nodes()) {
    const auto [first, last] = tree.token_span(n.id);
    out << "  " << n.id << ' ' << n.label << " parent="
        << (n.parent ? std::to_string(*n.parent) : "-") << " depth=" << tree.depth(n.id)
        << " span=" << first << "-" << last;
    if (n.word) out << " word=" << *n.word;
    out << "\n";
  }

  const Adjacency adj = BuildAdjacency(tree);
  out << "== adjacency shape " << adj.size() << "x" << adj.size() << "\n";
  for (int i = 0; i < adj.size(); ++i) {
    out << "  ";
    for (int j = 0; j < adj.size(); ++j) out << (adj.at(i, j) ? '1' : '0');
    out << "\n";
  }

  SentenceEncoding enc = parser.Encode(sentence);
  out << "== gcn\n";
  if (enc.constituents) {
    const auto& layers = enc.constituents->layer_outputs;
    for (size_t l = 0; l < layers.size(); ++l) Matrix(out, "H" + std::to_string(l), layers[l]);
  } else {
    out << "disabled (path features are zero)\n";
  }

  out << "== root paths\n";
  Paths(out, parser, sentence, tree.root());
  Matrix(out, "p_root", enc.p_root);
  Matrix(out, "a", enc.a);

  const ad::Tensor emissions = parser.TiEmissions(enc);
  Matrix(out, "ti_emissions", emissions);
  const CrfConstraints iobc = IobcConstraints();
  const std::vector<int> labels = Viterbi(emissions, parser.model().ti_crf, &iobc).labels;
  const std::vector<std::vector<int>> targets = DecodeIobc(labels);
  out << "viterbi:";
  for (int label : labels) out << ' ' << IobcName(label);
  out << "\ntargets:";
  for (const auto& t : targets) {
    out << " {";
    for (size_t k = 0; k < t.size(); ++k) out << (k ? "," : "") << t[k];
    out << "}";
  }
  out << "\n";

  if (!reference) {
    if (!sentence.annotations.empty()) {
      const auto& t = sentence.annotations.front().target;
      reference = *std::min_element(t.begin(), t.end());
    } else if (!targets.empty()) {
      reference = targets.front().front();
    }
  }
  if (reference) {
    if (*reference < 0 || *reference >= sentence.size()) {
      throw DataError("trace reference token out of range");
    }
    out << "== predicate paths (reference token " << *reference << " "
        << sentence.tokens[*reference] << ")\n";
    Paths(out, parser, sentence, TokenNode(tree, *reference));
    Matrix(out, "p_l", parser.PredicatePath(&enc, *reference));
    Matrix(out, "b", parser.PredicateBackbone(&enc, *reference));
  }
  return out.str();
}

}  // namespace frameparse
