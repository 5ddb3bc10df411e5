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

#ifndef FRAMEPARSE_SYNTAX_H_
#define FRAMEPARSE_SYNTAX_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace frameparse {

// A constituent or preterminal in a constituency tree. Preterminals carry
// the token they dominate as a payload; words are never nodes of their own.
struct Node {
  int id = 0;
  std::string label;
  std::optional<int> parent;
  std::vector<int> children;
  std::optional<std::string> word;

  bool is_preterminal() const { return word.has_value(); }
};

// Indexed constituency tree. Node ids are assigned in pre-order, so the
// root is always node 0 and every parent id is smaller than its children's.
class ConstTree {
 public:
  ConstTree() = default;

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int id) const { return nodes_.at(id); }
  int size() const { return static_cast<int>(nodes_.size()); }
  int root() const { return 0; }

  // preterminal_order()[i] is the node that stands for token i.
  const std::vector<int>& preterminal_order() const { return preterminals_; }
  int num_tokens() const { return static_cast<int>(preterminals_.size()); }

  // Distance in edges from the root.
  int depth(int id) const { return depth_.at(id); }
  // Maximum node depth.
  int height() const;

  // Inclusive token range [first, last] covered by a node.
  std::pair<int, int> token_span(int id) const;

  std::vector<std::string> words() const;
  std::vector<std::string> pos_tags() const;

 private:
  friend ConstTree ParseBracketed(std::string_view text);
  friend ConstTree BuildTree(std::vector<Node> nodes);

  void Index();

  std::vector<Node> nodes_;
  std::vector<int> preterminals_;
  std::vector<int> depth_;
  std::vector<std::pair<int, int>> spans_;
};

// Parses a Penn-Treebank-style bracketed string such as
// "(S (NP (PRP I)) (VP (VBD ran)))". Whitespace between tokens is free.
// A nameless outer wrapper "( (S ...) )" is unwrapped. Throws DataError on
// unbalanced parentheses, leaves without a word, or an empty tree.
ConstTree ParseBracketed(std::string_view text);

// Builds a tree from explicit nodes (ids and links must already be
// consistent and in pre-order). Throws DataError otherwise.
ConstTree BuildTree(std::vector<Node> nodes);

// Renders a tree back to bracketed form with single spaces.
std::string Serialize(const ConstTree& tree);

// Dense boolean N x N matrix, row-major.
class Adjacency {
 public:
  explicit Adjacency(int n) : n_(n), data_(static_cast<size_t>(n) * n, 0) {}
  int size() const { return n_; }
  bool at(int i, int j) const { return data_[static_cast<size_t>(i) * n_ + j]; }
  void set(int i, int j) { data_[static_cast<size_t>(i) * n_ + j] = 1; }
  int row_count(int i) const;
  int count() const;

 private:
  int n_;
  std::vector<uint8_t> data_;
};

// A[i][j] is set iff j is a child of i or j == i, so row i lists the
// sources that node i aggregates from (edges run child -> father).
Adjacency BuildAdjacency(const ConstTree& tree);

// Node ids on the unique path from i to j, both endpoints included.
std::vector<int> TreePath(const ConstTree& tree, int i, int j);

// Preterminal node standing for a token. Throws DataError when out of range.
int TokenNode(const ConstTree& tree, int token_index);

}  // namespace frameparse

#endif  // FRAMEPARSE_SYNTAX_H_
