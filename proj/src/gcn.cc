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

#include "frameparse/gcn.h"

#include "frameparse/errors.h"

namespace frameparse {

GcnParams MakeGcn(ParameterSet* ps, const std::string& name, int num_labels,
                  int input_dim, int hidden_dim, int num_layers,
                  std::mt19937_64* rng) {
  if (num_layers < 1) throw ConfigError("GCN needs at least one layer");
  GcnParams g;
  g.labels.table = ps->Embedding(name + ".labels", num_labels, input_dim, rng);
  int in = input_dim;
  for (int l = 0; l < num_layers; ++l) {
    const std::string p = name + ".layer" + std::to_string(l);
    GcnLayer layer;
    layer.weight = ps->Matrix(p + ".weight", in, hidden_dim, in, rng);
    layer.bias = ps->Bias(p + ".bias", hidden_dim);
    layer.ln_gain = ps->Gain(p + ".ln_gain", hidden_dim);
    layer.ln_bias = ps->Bias(p + ".ln_bias", hidden_dim);
    g.layers.push_back(layer);
    in = hidden_dim;
  }
  return g;
}

std::vector<int> NodeLabelIds(const ConstTree& tree, const Vocabulary& labels) {
  std::vector<int> ids;
  ids.reserve(tree.size());
  for (const Node& n : tree.nodes()) ids.push_back(labels.Id(n.label));
  return ids;
}

ConstituentEncodings GcnForward(const GcnParams& params, const ConstTree& tree,
                                const std::vector<int>& label_ids,
                                double dropout, bool train,
                                std::mt19937_64* rng) {
  const int n = tree.size();
  if (static_cast<int>(label_ids.size()) != n) {
    throw DataError("GCN: one label id per node required");
  }
  const Adjacency adj = BuildAdjacency(tree);
  std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double w = params.mean_aggregation ? 1.0 / adj.row_count(i) : 1.0;
    for (int j = 0; j < n; ++j) {
      if (adj.at(i, j)) a[static_cast<size_t>(i) * n + j] = w;
    }
  }
  const ad::Tensor a_matrix = ad::Tensor::FromValues(n, n, std::move(a));

  ConstituentEncodings enc;
  ad::Tensor h = params.labels.Lookup(label_ids);
  enc.layer_outputs.push_back(h);
  for (const GcnLayer& layer : params.layers) {
    ad::Tensor in = ad::Dropout(h, dropout, train, rng);
    ad::Tensor pre =
        ad::AddRow(ad::MatMul(ad::MatMul(a_matrix, in), layer.weight), layer.bias);
    h = ad::LayerNorm(ad::Relu(pre), layer.ln_gain, layer.ln_bias);
    enc.layer_outputs.push_back(h);
  }
  enc.h = h;
  return enc;
}

std::vector<int> PathNodes(const ConstTree& tree, int i, int j,
                           bool include_endpoints) {
  std::vector<int> path = TreePath(tree, i, j);
  if (!include_endpoints) {
    path.erase(path.begin());
    if (!path.empty()) path.pop_back();
  }
  return path;
}

ad::Tensor PathFeature(const ConstituentEncodings& enc, const ConstTree& tree,
                       int i, int j, bool include_endpoints) {
  return ad::SumRows(enc.h, PathNodes(tree, i, j, include_endpoints));
}

int PathReference::Node(const ConstTree& tree) const {
  return is_root ? tree.root() : TokenNode(tree, token);
}

ad::Tensor PathSequence(const ConstituentEncodings& enc, const ConstTree& tree,
                        PathReference reference, bool include_endpoints) {
  const int ref = reference.Node(tree);
  std::vector<std::vector<int>> groups;
  groups.reserve(tree.num_tokens());
  for (int t = 0; t < tree.num_tokens(); ++t) {
    groups.push_back(PathNodes(tree, TokenNode(tree, t), ref, include_endpoints));
  }
  return ad::GatherSum(enc.h, groups);
}

}  // namespace frameparse
