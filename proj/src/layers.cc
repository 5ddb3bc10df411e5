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

#include "frameparse/layers.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "frameparse/errors.h"

namespace frameparse {

ad::Tensor ParameterSet::Add(const std::string& name, ad::Tensor t, bool decay) {
  if (Find(name)) throw Error("duplicate parameter " + name);
  params_.push_back({name, t, decay});
  return t;
}

ad::Tensor ParameterSet::Matrix(const std::string& name, int rows, int cols,
                                int fan_in, std::mt19937_64* rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  std::vector<double> v(static_cast<size_t>(rows) * cols);
  for (double& x : v) x = dist(*rng);
  return Add(name, ad::Tensor::FromValues(rows, cols, std::move(v), true), true);
}

ad::Tensor ParameterSet::Bias(const std::string& name, int cols, double fill) {
  return Add(name,
             ad::Tensor::FromValues(1, cols, std::vector<double>(cols, fill), true),
             false);
}

ad::Tensor ParameterSet::Zeros(const std::string& name, int rows, int cols) {
  return Add(name, ad::Tensor::Zeros(rows, cols, true), true);
}

ad::Tensor ParameterSet::Gain(const std::string& name, int cols) {
  return Bias(name, cols, 1.0);
}

ad::Tensor ParameterSet::Embedding(const std::string& name, int rows, int cols,
                                   std::mt19937_64* rng, bool trainable) {
  std::normal_distribution<double> dist(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
  std::vector<double> v(static_cast<size_t>(rows) * cols);
  for (double& x : v) x = dist(*rng) * scale;
  return Add(name,
             ad::Tensor::FromValues(rows, cols, std::move(v), trainable), false);
}

const Parameter* ParameterSet::Find(const std::string& name) const {
  for (const Parameter& p : params_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

size_t ParameterSet::TotalSize() const {
  size_t n = 0;
  for (const Parameter& p : params_) n += p.tensor.size();
  return n;
}

void ParameterSet::ZeroGrad() {
  for (Parameter& p : params_) p.tensor.ZeroGrad();
}

ad::Tensor EmbeddingTable::Lookup(const std::vector<int>& ids) const {
  return ad::RowSelect(table, ids);
}

int LoadTextVectors(const std::string& path, const Vocabulary& vocab,
                    EmbeddingTable* table) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vectors " + path);
  std::string line;
  int replaced = 0, line_no = 0;
  auto& values = table->table.mutable_values();
  const int dim = table->dim();
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string token;
    if (!(ss >> token)) continue;
    std::vector<double> vec;
    double x;
    while (ss >> x) vec.push_back(x);
    if (static_cast<int>(vec.size()) != dim) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(dim) + " values, got " +
                      std::to_string(vec.size()));
    }
    if (!vocab.Contains(token)) continue;
    const int id = vocab.Id(token);
    std::copy(vec.begin(), vec.end(), values.begin() + static_cast<size_t>(id) * dim);
    ++replaced;
  }
  return replaced;
}

ad::Tensor Linear::Forward(const ad::Tensor& x) const {
  ad::Tensor y = ad::MatMul(x, weight);
  return bias.defined() ? ad::AddRow(y, bias) : y;
}

Linear MakeLinear(ParameterSet* ps, const std::string& name, int in, int out,
                  bool bias, std::mt19937_64* rng) {
  Linear l;
  l.weight = ps->Matrix(name + ".weight", in, out, in, rng);
  if (bias) l.bias = ps->Bias(name + ".bias", out);
  return l;
}

ad::Tensor LabelBilinear::Score(const ad::Tensor& left,
                                const ad::Tensor& right) const {
  return ScoreRows(left, right);
}

ad::Tensor LabelBilinear::ScoreRows(const ad::Tensor& left,
                                    const ad::Tensor& rights) const {
  // (rights * (left U_k)^T) gives one column per label.
  std::vector<ad::Tensor> columns;
  columns.reserve(forms.size());
  for (const ad::Tensor& u : forms) {
    columns.push_back(ad::MatMul(rights, ad::Transpose(ad::MatMul(left, u))));
  }
  return ad::ConcatCols(columns);
}

LabelBilinear MakeLabelBilinear(ParameterSet* ps, const std::string& name,
                                int labels, int d1, int d2,
                                std::mt19937_64* rng) {
  if (labels < 1) throw Error("bilinear needs at least one label");
  LabelBilinear b;
  for (int k = 0; k < labels; ++k) {
    b.forms.push_back(ps->Matrix(name + ".u" + std::to_string(k), d1, d2, d1, rng));
  }
  return b;
}

ad::Tensor LstmCell::Run(const ad::Tensor& x, bool reverse) const {
  if (x.cols() != input_weight.rows()) {
    throw NumericError("LSTM input dim " + std::to_string(x.cols()) +
                       " != " + std::to_string(input_weight.rows()));
  }
  const int n = x.rows();
  const int h = hidden();
  ad::Tensor projected = ad::AddRow(ad::MatMul(x, input_weight), bias);
  ad::Tensor state = ad::Tensor::Zeros(1, h);
  ad::Tensor cell = ad::Tensor::Zeros(1, h);
  std::vector<ad::Tensor> outputs(n);
  for (int step = 0; step < n; ++step) {
    const int t = reverse ? n - 1 - step : step;
    ad::Tensor gates = ad::SliceRows(projected, t, 1);
    if (step > 0) gates = ad::Add(gates, ad::MatMul(state, recurrent_weight));
    ad::Tensor in_gate = ad::Sigmoid(ad::SliceCols(gates, 0, h));
    ad::Tensor forget_gate = ad::Sigmoid(ad::SliceCols(gates, h, h));
    ad::Tensor candidate = ad::Tanh(ad::SliceCols(gates, 2 * h, h));
    ad::Tensor out_gate = ad::Sigmoid(ad::SliceCols(gates, 3 * h, h));
    ad::Tensor update = ad::Mul(in_gate, candidate);
    cell = step > 0 ? ad::Add(ad::Mul(forget_gate, cell), update) : update;
    state = ad::Mul(out_gate, ad::Tanh(cell));
    outputs[t] = state;
  }
  return ad::ConcatRows(outputs);
}

ad::Tensor BiLstm::Forward(const ad::Tensor& x, double dropout, bool train,
                           std::mt19937_64* rng) const {
  ad::Tensor h = x;
  for (int l = 0; l < layers(); ++l) {
    if (l > 0) h = ad::Dropout(h, dropout, train, rng);
    h = ad::ConcatCols({forward[l].Run(h, false), backward[l].Run(h, true)});
  }
  return h;
}

BiLstm MakeBiLstm(ParameterSet* ps, const std::string& name, int input,
                  int hidden, int layers, std::mt19937_64* rng) {
  BiLstm b;
  for (int l = 0; l < layers; ++l) {
    const int in = l == 0 ? input : 2 * hidden;
    for (int dir = 0; dir < 2; ++dir) {
      const std::string p =
          name + ".layer" + std::to_string(l) + (dir == 0 ? ".fwd" : ".bwd");
      LstmCell cell;
      cell.input_weight = ps->Matrix(p + ".input_weight", in, 4 * hidden, in, rng);
      cell.recurrent_weight =
          ps->Matrix(p + ".recurrent_weight", hidden, 4 * hidden, hidden, rng);
      std::vector<double> bias(4 * hidden, 0.0);
      for (int j = hidden; j < 2 * hidden; ++j) bias[j] = 1.0;
      cell.bias = ps->Bias(p + ".bias", 4 * hidden);
      cell.bias.mutable_values() = bias;
      (dir == 0 ? b.forward : b.backward).push_back(cell);
    }
  }
  return b;
}

}  // namespace frameparse
