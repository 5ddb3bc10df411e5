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

#ifndef FRAMEPARSE_LAYERS_H_
#define FRAMEPARSE_LAYERS_H_

#include <random>
#include <string>
#include <vector>

#include "frameparse/autodiff.h"
#include "frameparse/corpus.h"

namespace frameparse {

// A trainable array with a stable hierarchical name ("gcn.layer0.weight").
struct Parameter {
  std::string name;
  ad::Tensor tensor;
  // Whether decoupled weight decay applies (false for biases, layer-norm
  // parameters and embeddings).
  bool decay = true;
};

// Owns every trainable array of a model in creation order.
class ParameterSet {
 public:
  ad::Tensor Matrix(const std::string& name, int rows, int cols, int fan_in,
                    std::mt19937_64* rng);
  ad::Tensor Bias(const std::string& name, int cols, double fill = 0.0);
  // Zero-initialised matrix subject to weight decay.
  ad::Tensor Zeros(const std::string& name, int rows, int cols);
  ad::Tensor Gain(const std::string& name, int cols);
  ad::Tensor Embedding(const std::string& name, int rows, int cols,
                       std::mt19937_64* rng, bool trainable = true);

  std::vector<Parameter>& params() { return params_; }
  const std::vector<Parameter>& params() const { return params_; }
  // nullptr when absent.
  const Parameter* Find(const std::string& name) const;
  size_t TotalSize() const;
  void ZeroGrad();

 private:
  ad::Tensor Add(const std::string& name, ad::Tensor t, bool decay);
  std::vector<Parameter> params_;
};

struct EmbeddingTable {
  ad::Tensor table;

  int vocab_size() const { return table.rows(); }
  int dim() const { return table.cols(); }
  // Row i of the output is table[ids[i]]. Throws NumericError on bad ids.
  ad::Tensor Lookup(const std::vector<int>& ids) const;
};

// Reads "token v1 v2 ..." lines into the rows of known tokens. Returns the
// number of rows replaced. Throws DataError on dimension mismatches.
int LoadTextVectors(const std::string& path, const Vocabulary& vocab,
                    EmbeddingTable* table);

// y = x W + b, x given as rows.
struct Linear {
  ad::Tensor weight;  // in x out
  ad::Tensor bias;    // 1 x out, may be undefined

  int in_dim() const { return weight.rows(); }
  int out_dim() const { return weight.cols(); }
  ad::Tensor Forward(const ad::Tensor& x) const;
};

Linear MakeLinear(ParameterSet* ps, const std::string& name, int in, int out,
                  bool bias, std::mt19937_64* rng);

// K bilinear forms, score_k = left^T U_k right.
struct LabelBilinear {
  std::vector<ad::Tensor> forms;  // each d1 x d2

  int num_labels() const { return static_cast<int>(forms.size()); }
  // left 1 x d1, right 1 x d2 -> 1 x K.
  ad::Tensor Score(const ad::Tensor& left, const ad::Tensor& right) const;
  // left 1 x d1, rights n x d2 -> n x K, row i scoring rights[i].
  ad::Tensor ScoreRows(const ad::Tensor& left, const ad::Tensor& rights) const;
};

LabelBilinear MakeLabelBilinear(ParameterSet* ps, const std::string& name,
                                int labels, int d1, int d2,
                                std::mt19937_64* rng);

// One direction of one LSTM layer. Gate column blocks are ordered
// input, forget, candidate, output.
struct LstmCell {
  ad::Tensor input_weight;      // in x 4h
  ad::Tensor recurrent_weight;  // h x 4h
  ad::Tensor bias;              // 1 x 4h

  int hidden() const { return recurrent_weight.rows(); }
  // Runs over the rows of x, right to left when `reverse`; output row t is
  // the hidden state after reading row t.
  ad::Tensor Run(const ad::Tensor& x, bool reverse) const;
};

struct BiLstm {
  std::vector<LstmCell> forward;
  std::vector<LstmCell> backward;

  int layers() const { return static_cast<int>(forward.size()); }
  int hidden() const { return forward.front().hidden(); }
  int output_dim() const { return 2 * hidden(); }
  int input_dim() const { return forward.front().input_weight.rows(); }

  // n x in -> n x 2h, each row [forward state | backward state]. Dropout is
  // applied between stacked layers when training.
  ad::Tensor Forward(const ad::Tensor& x, double dropout = 0.0,
                     bool train = false, std::mt19937_64* rng = nullptr) const;
};

BiLstm MakeBiLstm(ParameterSet* ps, const std::string& name, int input,
                  int hidden, int layers, std::mt19937_64* rng);

}  // namespace frameparse

#endif  // FRAMEPARSE_LAYERS_H_
