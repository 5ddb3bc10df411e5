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

#ifndef FRAMEPARSE_GCN_H_
#define FRAMEPARSE_GCN_H_

#include <random>
#include <string>
#include <vector>

#include "frameparse/autodiff.h"
#include "frameparse/corpus.h"
#include "frameparse/layers.h"
#include "frameparse/syntax.h"

namespace frameparse {

struct GcnLayer {
  ad::Tensor weight;   // D x E
  ad::Tensor bias;     // 1 x E
  ad::Tensor ln_gain;  // 1 x E
  ad::Tensor ln_bias;  // 1 x E
};

// Graph convolution over constituency trees:
//   H(l+1) = LN(ReLU(A H(l) W(l) + b(l))),  H(0) = label embeddings,
// with A holding self-loops and child -> father edges.
struct GcnParams {
  EmbeddingTable labels;
  std::vector<GcnLayer> layers;
  // Divide each aggregated row by its in-degree instead of summing.
  bool mean_aggregation = false;

  int output_dim() const {
    return layers.empty() ? labels.dim() : layers.back().weight.cols();
  }
};

GcnParams MakeGcn(ParameterSet* ps, const std::string& name, int num_labels,
                  int input_dim, int hidden_dim, int num_layers,
                  std::mt19937_64* rng);

// Row i is the encoding c_i of node i.
struct ConstituentEncodings {
  ad::Tensor h;
  // H(0) ... H(L), kept for inspection.
  std::vector<ad::Tensor> layer_outputs;
};

// Dropout (training only) is applied to each layer's input.
ConstituentEncodings GcnForward(const GcnParams& params, const ConstTree& tree,
                                const std::vector<int>& label_ids,
                                double dropout = 0.0, bool train = false,
                                std::mt19937_64* rng = nullptr);
// Maps node labels through `labels`; unseen labels are a DataError.
std::vector<int> NodeLabelIds(const ConstTree& tree, const Vocabulary& labels);

// Nodes summed into a path feature between i and j.
std::vector<int> PathNodes(const ConstTree& tree, int i, int j,
                           bool include_endpoints = true);

// p_ij = sum of c_k over the tree path between nodes i and j (1 x E).
ad::Tensor PathFeature(const ConstituentEncodings& enc, const ConstTree& tree,
                       int i, int j, bool include_endpoints = true);

// Reference node for token-wise path sequences: the tree root or the
// preterminal of a token (the first word of a multi-token target).
struct PathReference {
  static PathReference Root() { return {true, 0}; }
  static PathReference Token(int index) { return {false, index}; }

  int Node(const ConstTree& tree) const;

  bool is_root;
  int token;
};

// Row i is the path feature between token i's preterminal and the
// reference node (n x E).
ad::Tensor PathSequence(const ConstituentEncodings& enc, const ConstTree& tree,
                        PathReference reference, bool include_endpoints = true);

}  // namespace frameparse

#endif  // FRAMEPARSE_GCN_H_
