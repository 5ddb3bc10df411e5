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

#include "frameparse/syntax.h"

#include <algorithm>
#include <cctype>
#include <string>

#include "frameparse/errors.h"

namespace frameparse {
namespace {

enum class TokenKind { kOpen, kClose, kAtom };

struct Token {
  TokenKind kind;
  std::string text;
  size_t offset;
};

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      tokens.push_back({TokenKind::kOpen, "(", i++});
    } else if (c == ')') {
      tokens.push_back({TokenKind::kClose, ")", i++});
    } else {
      size_t start = i;
      while (i < text.size() && text[i] != '(' && text[i] != ')' &&
             !std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
      }
      tokens.push_back(
          {TokenKind::kAtom, std::string(text.substr(start, i - start)), start});
    }
  }
  return tokens;
}

// Recursive-descent parser over the token stream. Nodes are appended in
// pre-order.
class TreeReader {
 public:
  explicit TreeReader(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  std::vector<Node> Read() {
    if (tokens_.empty()) throw DataError("empty tree");
    if (tokens_[0].kind != TokenKind::kOpen) {
      throw DataError("tree must start with '('");
    }
    // Nameless wrapper: "( (S ...) )".
    if (tokens_.size() > 1 && tokens_[1].kind == TokenKind::kOpen) {
      ++pos_;
      ReadNode(std::nullopt);
      Expect(TokenKind::kClose);
    } else {
      ReadNode(std::nullopt);
    }
    if (pos_ != tokens_.size()) {
      throw DataError("trailing input after tree at offset " +
                      std::to_string(tokens_[pos_].offset));
    }
    return std::move(nodes_);
  }

 private:
  const Token& Peek() {
    if (pos_ >= tokens_.size()) throw DataError("unbalanced parentheses");
    return tokens_[pos_];
  }

  void Expect(TokenKind kind) {
    const Token& t = Peek();
    if (t.kind != kind) {
      throw DataError("unexpected '" + t.text + "' at offset " +
                      std::to_string(t.offset));
    }
    ++pos_;
  }

  int ReadNode(std::optional<int> parent) {
    Expect(TokenKind::kOpen);
    const Token& label = Peek();
    if (label.kind != TokenKind::kAtom) {
      throw DataError("missing node label at offset " +
                      std::to_string(label.offset));
    }
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{id, label.text, parent, {}, std::nullopt});
    ++pos_;
    const Token& next = Peek();
    if (next.kind == TokenKind::kAtom) {
      nodes_[id].word = next.text;
      ++pos_;
      Expect(TokenKind::kClose);
      return id;
    }
    if (next.kind == TokenKind::kClose) {
      throw DataError("leaf '" + nodes_[id].label + "' without a word");
    }
    while (Peek().kind == TokenKind::kOpen) {
      int child = ReadNode(id);
      nodes_[id].children.push_back(child);
    }
    if (Peek().kind == TokenKind::kAtom) {
      throw DataError("node '" + nodes_[id].label +
                      "' mixes words and constituents");
    }
    Expect(TokenKind::kClose);
    return id;
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
  std::vector<Node> nodes_;
};

void SerializeNode(const ConstTree& tree, int id, std::string* out) {
  const Node& n = tree.node(id);
  out->append("(");
  out->append(n.label);
  if (n.word) {
    out->append(" ");
    out->append(*n.word);
  }
  for (int c : n.children) {
    out->append(" ");
    SerializeNode(tree, c, out);
  }
  out->append(")");
}

}  // namespace

void ConstTree::Index() {
  const int n = size();
  if (n == 0) throw DataError("empty tree");
  depth_.assign(n, 0);
  spans_.assign(n, {-1, -1});
  preterminals_.clear();
  for (int i = 0; i < n; ++i) {
    const Node& node = nodes_[i];
    if (node.id != i) throw DataError("node ids must be dense and ordered");
    if (i == 0) {
      if (node.parent) throw DataError("root has a parent");
    } else {
      if (!node.parent || *node.parent >= i || *node.parent < 0) {
        throw DataError("node " + std::to_string(i) +
                        " has no valid pre-order parent");
      }
      const auto& siblings = nodes_[*node.parent].children;
      if (std::find(siblings.begin(), siblings.end(), i) == siblings.end()) {
        throw DataError("parent/child links disagree at node " +
                        std::to_string(i));
      }
      depth_[i] = depth_[*node.parent] + 1;
    }
    if (node.word && !node.children.empty()) {
      throw DataError("preterminal " + std::to_string(i) + " has children");
    }
    if (!node.word && node.children.empty()) {
      throw DataError("leaf '" + node.label + "' without a word");
    }
    for (int c : node.children) {
      if (c <= i || c >= n || nodes_[c].parent != i) {
        throw DataError("parent/child links disagree at node " +
                        std::to_string(i));
      }
    }
  }
  // Pre-order numbering lists preterminals left to right.
  for (int i = 0; i < n; ++i) {
    if (nodes_[i].word) {
      int t = static_cast<int>(preterminals_.size());
      preterminals_.push_back(i);
      spans_[i] = {t, t};
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    if (!nodes_[i].parent) continue;
    auto& ps = spans_[*nodes_[i].parent];
    const auto& cs = spans_[i];
    ps.first = ps.first < 0 ? cs.first : std::min(ps.first, cs.first);
    ps.second = std::max(ps.second, cs.second);
  }
}

int ConstTree::height() const {
  return depth_.empty() ? 0 : *std::max_element(depth_.begin(), depth_.end());
}

std::pair<int, int> ConstTree::token_span(int id) const { return spans_.at(id); }

std::vector<std::string> ConstTree::words() const {
  std::vector<std::string> out;
  out.reserve(preterminals_.size());
  for (int p : preterminals_) out.push_back(*nodes_[p].word);
  return out;
}

std::vector<std::string> ConstTree::pos_tags() const {
  std::vector<std::string> out;
  out.reserve(preterminals_.size());
  for (int p : preterminals_) out.push_back(nodes_[p].label);
  return out;
}

ConstTree ParseBracketed(std::string_view text) {
  ConstTree tree;
  tree.nodes_ = TreeReader(Tokenize(text)).Read();
  tree.Index();
  return tree;
}

ConstTree BuildTree(std::vector<Node> nodes) {
  ConstTree tree;
  tree.nodes_ = std::move(nodes);
  tree.Index();
  return tree;
}

std::string Serialize(const ConstTree& tree) {
  std::string out;
  SerializeNode(tree, tree.root(), &out);
  return out;
}

int Adjacency::row_count(int i) const {
  int c = 0;
  for (int j = 0; j < n_; ++j) c += at(i, j);
  return c;
}

int Adjacency::count() const {
  int c = 0;
  for (uint8_t v : data_) c += v;
  return c;
}

Adjacency BuildAdjacency(const ConstTree& tree) {
  Adjacency a(tree.size());
  for (const Node& n : tree.nodes()) {
    a.set(n.id, n.id);
    for (int c : n.children) a.set(n.id, c);
  }
  return a;
}

std::vector<int> TreePath(const ConstTree& tree, int i, int j) {
  if (i < 0 || j < 0 || i >= tree.size() || j >= tree.size()) {
    throw DataError("node id out of range");
  }
  std::vector<int> up;    // from i towards the common ancestor
  std::vector<int> down;  // from j towards the common ancestor
  int a = i, b = j;
  while (tree.depth(a) > tree.depth(b)) {
    up.push_back(a);
    a = *tree.node(a).parent;
  }
  while (tree.depth(b) > tree.depth(a)) {
    down.push_back(b);
    b = *tree.node(b).parent;
  }
  while (a != b) {
    up.push_back(a);
    down.push_back(b);
    a = *tree.node(a).parent;
    b = *tree.node(b).parent;
  }
  up.push_back(a);
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

int TokenNode(const ConstTree& tree, int token_index) {
  if (token_index < 0 || token_index >= tree.num_tokens()) {
    throw DataError("token index " + std::to_string(token_index) +
                    " out of range for " + std::to_string(tree.num_tokens()) +
                    " tokens");
  }
  return tree.preterminal_order()[token_index];
}

}  // namespace frameparse
