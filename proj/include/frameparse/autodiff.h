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

#ifndef FRAMEPARSE_AUTODIFF_H_
#define FRAMEPARSE_AUTODIFF_H_

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace frameparse {
namespace ad {

struct TensorImpl;

// Dense row-major matrix of doubles participating in a reverse-mode
// computation graph. Vectors are 1 x n rows. Copies share storage.
class Tensor {
 public:
  Tensor() = default;

  static Tensor Zeros(int rows, int cols, bool requires_grad = false);
  static Tensor FromValues(int rows, int cols, std::vector<double> values,
                           bool requires_grad = false);
  static Tensor Scalar(double v);
  static Tensor Row(std::vector<double> values);

  bool defined() const { return impl_ != nullptr; }
  int rows() const;
  int cols() const;
  size_t size() const;
  bool is_scalar() const { return rows() == 1 && cols() == 1; }

  const std::vector<double>& values() const;
  // Writable storage, for parameter initialisation and optimiser updates.
  std::vector<double>& mutable_values();
  double at(int r, int c) const;
  double item() const;

  bool requires_grad() const;
  // Gradient accumulated by Backward(); empty until one has flowed in.
  const std::vector<double>& grad() const;
  std::vector<double>& mutable_grad();
  void ZeroGrad();

  TensorImpl* impl() const { return impl_.get(); }

 private:
  explicit Tensor(std::shared_ptr<TensorImpl> impl) : impl_(std::move(impl)) {}
  friend Tensor MakeResult(int, int, std::vector<double>,
                           std::vector<Tensor>,
                           std::function<void(TensorImpl&)>);

  std::shared_ptr<TensorImpl> impl_;
};

// Backpropagation record of one op: `backward` reads the output gradient and
// accumulates into the inputs' gradients.
struct TensorImpl {
  int rows = 0;
  int cols = 0;
  std::vector<double> value;
  std::vector<double> grad;
  bool requires_grad = false;
  std::vector<std::shared_ptr<TensorImpl>> inputs;
  std::function<void(TensorImpl&)> backward;

  std::vector<double>& EnsureGrad();
};

// Creates an op output. Records `backward` only when some input needs a
// gradient and recording is enabled. Throws NumericError on non-finite
// values.
Tensor MakeResult(int rows, int cols, std::vector<double> values,
                  std::vector<Tensor> inputs,
                  std::function<void(TensorImpl&)> backward);

// Disables graph recording on this thread while alive.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};
bool GradEnabled();

// Propagates d(loss)/d(x) into every reachable tensor that requires a
// gradient. Records are visited once each, in reverse topological order.
// Gradients accumulate; call ZeroGrad() on leaves between passes.
void Backward(const Tensor& loss);

// --- primitives -----------------------------------------------------------

Tensor MatMul(const Tensor& a, const Tensor& b);
Tensor Transpose(const Tensor& a);
Tensor Add(const Tensor& a, const Tensor& b);
Tensor Sub(const Tensor& a, const Tensor& b);
Tensor Mul(const Tensor& a, const Tensor& b);
// Adds a 1 x cols row to every row of x.
Tensor AddRow(const Tensor& x, const Tensor& row);
Tensor Scale(const Tensor& x, double s);
Tensor AddScalar(const Tensor& x, double s);
// Adds a constant (non-differentiable) matrix of the same shape.
Tensor AddConstant(const Tensor& x, const std::vector<double>& c);

Tensor ConcatRows(const std::vector<Tensor>& parts);
Tensor ConcatCols(const std::vector<Tensor>& parts);
Tensor SliceRows(const Tensor& x, int start, int count);
Tensor SliceCols(const Tensor& x, int start, int count);
// Gathers rows by index (repeats allowed); embedding lookup.
Tensor RowSelect(const Tensor& x, const std::vector<int>& rows);
// Output row g is the sum of x's rows listed in groups[g].
Tensor GatherSum(const Tensor& x, const std::vector<std::vector<int>>& groups);
// 1 x cols sum of the listed rows.
Tensor SumRows(const Tensor& x, const std::vector<int>& rows);
// 1 x 1 sum of all entries.
Tensor Sum(const Tensor& x);
// 1 x 1 element x[r][c].
Tensor Pick(const Tensor& x, int r, int c);

Tensor Relu(const Tensor& x);
Tensor LeakyRelu(const Tensor& x, double slope);
Tensor Tanh(const Tensor& x);
Tensor Sigmoid(const Tensor& x);

inline constexpr double kLayerNormEpsilon = 1e-5;
// Row-wise (x - mean) / sqrt(var + eps) * gain + bias; gain and bias 1 x cols.
Tensor LayerNorm(const Tensor& x, const Tensor& gain, const Tensor& bias,
                 double eps = kLayerNormEpsilon);
// Row-wise log-softmax.
Tensor LogSoftmax(const Tensor& x);
// axis 0 reduces rows (1 x cols result); axis 1 reduces columns (rows x 1).
Tensor LogSumExp(const Tensor& x, int axis);
// Inverted dropout; identity when !train or rate == 0.
Tensor Dropout(const Tensor& x, double rate, bool train, std::mt19937_64* rng);

// --- verification ---------------------------------------------------------

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

struct GradCheckEntry {
  std::string name;
  int checked = 0;
  double max_rel_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_error = 0.0;
  bool passed = false;
};

struct GradCheckOptions {
  double epsilon = 1e-4;
  double tolerance = 1e-4;
  // Lower bound of the relative-error denominator.
  double denominator_floor = 1e-6;
  // 0 checks every entry; otherwise the largest-gradient half plus a seeded
  // random sample of the remaining entries.
  int max_entries_per_tensor = 0;
  uint64_t seed = 1;
};

// Compares Backward() gradients of f against the fourth-order central
// difference (-f(x+2h) + 8f(x+h) - 8f(x-h) + f(x-2h)) / 12h. Relative error
// is |a - n| / max(denominator_floor, |a| + |n|). Throws Error if two
// evaluations of f at the same point differ.
GradCheckReport GradCheck(const std::function<Tensor()>& f,
                          const std::vector<NamedTensor>& params,
                          const GradCheckOptions& options = {});

}  // namespace ad
}  // namespace frameparse

#endif  // FRAMEPARSE_AUTODIFF_H_
