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

#include "frameparse/autodiff.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "frameparse/errors.h"

namespace frameparse {
namespace ad {
namespace {

thread_local bool g_grad_enabled = true;

std::string ShapeStr(const Tensor& t) {
  return std::to_string(t.rows()) + "x" + std::to_string(t.cols());
}

void RequireSameShape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw NumericError(std::string(op) + ": shape mismatch " + ShapeStr(a) +
                       " vs " + ShapeStr(b));
  }
}

// Elementwise unary op whose derivative is a function of input and output.
template <typename Fwd, typename Deriv>
Tensor Unary(const Tensor& x, Fwd fwd, Deriv deriv) {
  std::vector<double> out(x.size());
  const auto& xv = x.values();
  for (size_t i = 0; i < out.size(); ++i) out[i] = fwd(xv[i]);
  return MakeResult(x.rows(), x.cols(), std::move(out), {x},
                    [deriv](TensorImpl& self) {
                      TensorImpl& in = *self.inputs[0];
                      auto& g = in.EnsureGrad();
                      for (size_t i = 0; i < g.size(); ++i) {
                        g[i] += self.grad[i] * deriv(in.value[i], self.value[i]);
                      }
                    });
}

}  // namespace

std::vector<double>& TensorImpl::EnsureGrad() {
  if (grad.empty()) grad.assign(value.size(), 0.0);
  return grad;
}

Tensor Tensor::Zeros(int rows, int cols, bool requires_grad) {
  return FromValues(rows, cols,
                    std::vector<double>(static_cast<size_t>(rows) * cols, 0.0),
                    requires_grad);
}

Tensor Tensor::FromValues(int rows, int cols, std::vector<double> values,
                          bool requires_grad) {
  if (rows < 0 || cols < 0 ||
      values.size() != static_cast<size_t>(rows) * cols) {
    throw NumericError("tensor value count does not match shape");
  }
  auto impl = std::make_shared<TensorImpl>();
  impl->rows = rows;
  impl->cols = cols;
  impl->value = std::move(values);
  impl->requires_grad = requires_grad;
  return Tensor(std::move(impl));
}

Tensor Tensor::Scalar(double v) { return FromValues(1, 1, {v}); }

Tensor Tensor::Row(std::vector<double> values) {
  int n = static_cast<int>(values.size());
  return FromValues(1, n, std::move(values));
}

int Tensor::rows() const { return impl_->rows; }
int Tensor::cols() const { return impl_->cols; }
size_t Tensor::size() const { return impl_->value.size(); }
const std::vector<double>& Tensor::values() const { return impl_->value; }
std::vector<double>& Tensor::mutable_values() { return impl_->value; }

double Tensor::at(int r, int c) const {
  return impl_->value[static_cast<size_t>(r) * impl_->cols + c];
}

double Tensor::item() const {
  if (!is_scalar()) throw NumericError("item() on non-scalar " + ShapeStr(*this));
  return impl_->value[0];
}

bool Tensor::requires_grad() const { return impl_->requires_grad; }
const std::vector<double>& Tensor::grad() const { return impl_->grad; }
std::vector<double>& Tensor::mutable_grad() { return impl_->EnsureGrad(); }
void Tensor::ZeroGrad() { impl_->grad.clear(); }

Tensor MakeResult(int rows, int cols, std::vector<double> values,
                  std::vector<Tensor> inputs,
                  std::function<void(TensorImpl&)> backward) {
  for (double v : values) {
    if (!std::isfinite(v)) throw NumericError("non-finite value in forward pass");
  }
  auto impl = std::make_shared<TensorImpl>();
  impl->rows = rows;
  impl->cols = cols;
  impl->value = std::move(values);
  bool needs = false;
  if (g_grad_enabled) {
    for (const Tensor& t : inputs) needs = needs || t.requires_grad();
  }
  if (needs) {
    impl->requires_grad = true;
    impl->inputs.reserve(inputs.size());
    for (const Tensor& t : inputs) impl->inputs.push_back(t.impl_);
    impl->backward = std::move(backward);
  }
  return Tensor(std::move(impl));
}

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }
bool GradEnabled() { return g_grad_enabled; }

void Backward(const Tensor& loss) {
  if (!loss.defined() || !loss.is_scalar()) {
    throw NumericError("Backward() requires a scalar loss");
  }
  TensorImpl* root = loss.impl();
  if (!root->requires_grad) return;
  // Iterative post-order DFS: the tape lists every record after its inputs.
  std::vector<TensorImpl*> tape;
  std::unordered_set<TensorImpl*> seen;
  std::vector<std::pair<TensorImpl*, size_t>> stack;
  stack.emplace_back(root, 0);
  seen.insert(root);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->inputs.size()) {
      TensorImpl* in = node->inputs[next++].get();
      if (in->requires_grad && in->backward && seen.insert(in).second) {
        stack.emplace_back(in, 0);
      }
    } else {
      tape.push_back(node);
      stack.pop_back();
    }
  }
  root->EnsureGrad()[0] += 1.0;
  for (auto it = tape.rbegin(); it != tape.rend(); ++it) {
    TensorImpl* node = *it;
    if (node->grad.empty()) continue;
    node->backward(*node);
  }
}

Tensor MatMul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw NumericError("MatMul: shape mismatch " + ShapeStr(a) + " * " +
                       ShapeStr(b));
  }
  const int m = a.rows(), k = a.cols(), n = b.cols();
  std::vector<double> out(static_cast<size_t>(m) * n, 0.0);
  const double* av = a.values().data();
  const double* bv = b.values().data();
  for (int i = 0; i < m; ++i) {
    double* orow = out.data() + static_cast<size_t>(i) * n;
    for (int p = 0; p < k; ++p) {
      const double aip = av[static_cast<size_t>(i) * k + p];
      if (aip == 0.0) continue;
      const double* brow = bv + static_cast<size_t>(p) * n;
      for (int j = 0; j < n; ++j) orow[j] += aip * brow[j];
    }
  }
  return MakeResult(m, n, std::move(out), {a, b}, [m, k, n](TensorImpl& self) {
    TensorImpl& A = *self.inputs[0];
    TensorImpl& B = *self.inputs[1];
    const double* g = self.grad.data();
    if (A.requires_grad) {
      auto& ga = A.EnsureGrad();
      for (int i = 0; i < m; ++i) {
        const double* grow = g + static_cast<size_t>(i) * n;
        for (int p = 0; p < k; ++p) {
          const double* brow = B.value.data() + static_cast<size_t>(p) * n;
          double s = 0.0;
          for (int j = 0; j < n; ++j) s += grow[j] * brow[j];
          ga[static_cast<size_t>(i) * k + p] += s;
        }
      }
    }
    if (B.requires_grad) {
      auto& gb = B.EnsureGrad();
      for (int i = 0; i < m; ++i) {
        const double* grow = g + static_cast<size_t>(i) * n;
        for (int p = 0; p < k; ++p) {
          const double aip = A.value[static_cast<size_t>(i) * k + p];
          if (aip == 0.0) continue;
          double* gbrow = gb.data() + static_cast<size_t>(p) * n;
          for (int j = 0; j < n; ++j) gbrow[j] += aip * grow[j];
        }
      }
    }
  });
}

Tensor Transpose(const Tensor& a) {
  const int m = a.rows(), n = a.cols();
  std::vector<double> out(a.size());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) out[static_cast<size_t>(j) * m + i] = a.at(i, j);
  return MakeResult(n, m, std::move(out), {a}, [m, n](TensorImpl& self) {
    auto& g = self.inputs[0]->EnsureGrad();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        g[static_cast<size_t>(i) * n + j] +=
            self.grad[static_cast<size_t>(j) * m + i];
  });
}

Tensor Add(const Tensor& a, const Tensor& b) {
  RequireSameShape(a, b, "Add");
  std::vector<double> out(a.values());
  for (size_t i = 0; i < out.size(); ++i) out[i] += b.values()[i];
  return MakeResult(a.rows(), a.cols(), std::move(out), {a, b},
                    [](TensorImpl& self) {
                      for (auto& in : self.inputs) {
                        if (!in->requires_grad) continue;
                        auto& g = in->EnsureGrad();
                        for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
                      }
                    });
}

Tensor Sub(const Tensor& a, const Tensor& b) {
  RequireSameShape(a, b, "Sub");
  std::vector<double> out(a.values());
  for (size_t i = 0; i < out.size(); ++i) out[i] -= b.values()[i];
  return MakeResult(a.rows(), a.cols(), std::move(out), {a, b},
                    [](TensorImpl& self) {
                      for (int k = 0; k < 2; ++k) {
                        TensorImpl& in = *self.inputs[k];
                        if (!in.requires_grad) continue;
                        const double sign = k == 0 ? 1.0 : -1.0;
                        auto& g = in.EnsureGrad();
                        for (size_t i = 0; i < g.size(); ++i) {
                          g[i] += sign * self.grad[i];
                        }
                      }
                    });
}

Tensor Mul(const Tensor& a, const Tensor& b) {
  RequireSameShape(a, b, "Mul");
  std::vector<double> out(a.values());
  for (size_t i = 0; i < out.size(); ++i) out[i] *= b.values()[i];
  return MakeResult(a.rows(), a.cols(), std::move(out), {a, b},
                    [](TensorImpl& self) {
                      TensorImpl& A = *self.inputs[0];
                      TensorImpl& B = *self.inputs[1];
                      if (A.requires_grad) {
                        auto& g = A.EnsureGrad();
                        for (size_t i = 0; i < g.size(); ++i) {
                          g[i] += self.grad[i] * B.value[i];
                        }
                      }
                      if (B.requires_grad) {
                        auto& g = B.EnsureGrad();
                        for (size_t i = 0; i < g.size(); ++i) {
                          g[i] += self.grad[i] * A.value[i];
                        }
                      }
                    });
}

Tensor AddRow(const Tensor& x, const Tensor& row) {
  if (row.rows() != 1 || row.cols() != x.cols()) {
    throw NumericError("AddRow: shape mismatch " + ShapeStr(x) + " + " +
                       ShapeStr(row));
  }
  const int m = x.rows(), n = x.cols();
  std::vector<double> out(x.values());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) out[static_cast<size_t>(i) * n + j] += row.values()[j];
  return MakeResult(m, n, std::move(out), {x, row}, [m, n](TensorImpl& self) {
    TensorImpl& X = *self.inputs[0];
    TensorImpl& R = *self.inputs[1];
    if (X.requires_grad) {
      auto& g = X.EnsureGrad();
      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
    if (R.requires_grad) {
      auto& g = R.EnsureGrad();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) g[j] += self.grad[static_cast<size_t>(i) * n + j];
    }
  });
}

Tensor Scale(const Tensor& x, double s) {
  std::vector<double> out(x.values());
  for (double& v : out) v *= s;
  return MakeResult(x.rows(), x.cols(), std::move(out), {x},
                    [s](TensorImpl& self) {
                      auto& g = self.inputs[0]->EnsureGrad();
                      for (size_t i = 0; i < g.size(); ++i) g[i] += s * self.grad[i];
                    });
}

Tensor AddScalar(const Tensor& x, double s) {
  std::vector<double> out(x.values());
  for (double& v : out) v += s;
  return MakeResult(x.rows(), x.cols(), std::move(out), {x},
                    [](TensorImpl& self) {
                      auto& g = self.inputs[0]->EnsureGrad();
                      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
                    });
}

Tensor AddConstant(const Tensor& x, const std::vector<double>& c) {
  if (c.size() != x.size()) throw NumericError("AddConstant: size mismatch");
  std::vector<double> out(x.values());
  for (size_t i = 0; i < out.size(); ++i) out[i] += c[i];
  return MakeResult(x.rows(), x.cols(), std::move(out), {x},
                    [](TensorImpl& self) {
                      auto& g = self.inputs[0]->EnsureGrad();
                      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
                    });
}

Tensor ConcatRows(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw NumericError("ConcatRows: no inputs");
  const int n = parts[0].cols();
  int m = 0;
  std::vector<double> out;
  for (const Tensor& p : parts) {
    if (p.cols() != n) throw NumericError("ConcatRows: column mismatch");
    m += p.rows();
    out.insert(out.end(), p.values().begin(), p.values().end());
  }
  return MakeResult(m, n, std::move(out), parts, [](TensorImpl& self) {
    size_t offset = 0;
    for (auto& in : self.inputs) {
      if (in->requires_grad) {
        auto& g = in->EnsureGrad();
        for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[offset + i];
      }
      offset += in->value.size();
    }
  });
}

Tensor ConcatCols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw NumericError("ConcatCols: no inputs");
  const int m = parts[0].rows();
  int n = 0;
  for (const Tensor& p : parts) {
    if (p.rows() != m) {
      throw NumericError("ConcatCols: row mismatch " + ShapeStr(parts[0]) +
                         " vs " + ShapeStr(p));
    }
    n += p.cols();
  }
  std::vector<double> out(static_cast<size_t>(m) * n);
  int offset = 0;
  for (const Tensor& p : parts) {
    const int c = p.cols();
    for (int i = 0; i < m; ++i)
      std::copy_n(p.values().begin() + static_cast<size_t>(i) * c, c,
                  out.begin() + static_cast<size_t>(i) * n + offset);
    offset += c;
  }
  return MakeResult(m, n, std::move(out), parts, [m, n](TensorImpl& self) {
    int off = 0;
    for (auto& in : self.inputs) {
      const int c = in->cols;
      if (in->requires_grad) {
        auto& g = in->EnsureGrad();
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < c; ++j)
            g[static_cast<size_t>(i) * c + j] +=
                self.grad[static_cast<size_t>(i) * n + off + j];
      }
      off += c;
    }
  });
}

Tensor SliceRows(const Tensor& x, int start, int count) {
  if (start < 0 || count < 0 || start + count > x.rows()) {
    throw NumericError("SliceRows: out of range");
  }
  const int n = x.cols();
  std::vector<double> out(x.values().begin() + static_cast<size_t>(start) * n,
                          x.values().begin() + static_cast<size_t>(start + count) * n);
  return MakeResult(count, n, std::move(out), {x}, [start, n](TensorImpl& self) {
    auto& g = self.inputs[0]->EnsureGrad();
    const size_t base = static_cast<size_t>(start) * n;
    for (size_t i = 0; i < self.grad.size(); ++i) g[base + i] += self.grad[i];
  });
}

Tensor SliceCols(const Tensor& x, int start, int count) {
  if (start < 0 || count < 0 || start + count > x.cols()) {
    throw NumericError("SliceCols: out of range");
  }
  const int m = x.rows(), n = x.cols();
  std::vector<double> out(static_cast<size_t>(m) * count);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < count; ++j)
      out[static_cast<size_t>(i) * count + j] = x.at(i, start + j);
  return MakeResult(m, count, std::move(out), {x},
                    [m, n, start, count](TensorImpl& self) {
                      auto& g = self.inputs[0]->EnsureGrad();
                      for (int i = 0; i < m; ++i)
                        for (int j = 0; j < count; ++j)
                          g[static_cast<size_t>(i) * n + start + j] +=
                              self.grad[static_cast<size_t>(i) * count + j];
                    });
}

Tensor RowSelect(const Tensor& x, const std::vector<int>& rows) {
  const int n = x.cols();
  std::vector<double> out;
  out.reserve(rows.size() * n);
  for (int r : rows) {
    if (r < 0 || r >= x.rows()) {
      throw NumericError("RowSelect: row " + std::to_string(r) +
                         " out of range for " + ShapeStr(x));
    }
    out.insert(out.end(), x.values().begin() + static_cast<size_t>(r) * n,
               x.values().begin() + static_cast<size_t>(r + 1) * n);
  }
  return MakeResult(static_cast<int>(rows.size()), n, std::move(out), {x},
                    [rows, n](TensorImpl& self) {
                      auto& g = self.inputs[0]->EnsureGrad();
                      for (size_t k = 0; k < rows.size(); ++k)
                        for (int j = 0; j < n; ++j)
                          g[static_cast<size_t>(rows[k]) * n + j] +=
                              self.grad[k * n + j];
                    });
}

Tensor GatherSum(const Tensor& x, const std::vector<std::vector<int>>& groups) {
  const int n = x.cols();
  std::vector<double> out(groups.size() * n, 0.0);
  for (size_t g = 0; g < groups.size(); ++g) {
    for (int r : groups[g]) {
      if (r < 0 || r >= x.rows()) throw NumericError("GatherSum: row out of range");
      for (int j = 0; j < n; ++j) out[g * n + j] += x.at(r, j);
    }
  }
  return MakeResult(static_cast<int>(groups.size()), n, std::move(out), {x},
                    [groups, n](TensorImpl& self) {
                      auto& gx = self.inputs[0]->EnsureGrad();
                      for (size_t g = 0; g < groups.size(); ++g)
                        for (int r : groups[g])
                          for (int j = 0; j < n; ++j)
                            gx[static_cast<size_t>(r) * n + j] += self.grad[g * n + j];
                    });
}

Tensor SumRows(const Tensor& x, const std::vector<int>& rows) {
  return GatherSum(x, {rows});
}

Tensor Sum(const Tensor& x) {
  double s = 0.0;
  for (double v : x.values()) s += v;
  return MakeResult(1, 1, {s}, {x}, [](TensorImpl& self) {
    auto& g = self.inputs[0]->EnsureGrad();
    for (double& v : g) v += self.grad[0];
  });
}

Tensor Pick(const Tensor& x, int r, int c) {
  if (r < 0 || c < 0 || r >= x.rows() || c >= x.cols()) {
    throw NumericError("Pick: index out of range");
  }
  const size_t idx = static_cast<size_t>(r) * x.cols() + c;
  return MakeResult(1, 1, {x.values()[idx]}, {x}, [idx](TensorImpl& self) {
    self.inputs[0]->EnsureGrad()[idx] += self.grad[0];
  });
}

Tensor Relu(const Tensor& x) {
  return Unary(
      x, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double in, double) { return in > 0.0 ? 1.0 : 0.0; });
}

Tensor LeakyRelu(const Tensor& x, double slope) {
  return Unary(
      x, [slope](double v) { return v > 0.0 ? v : slope * v; },
      [slope](double in, double) { return in > 0.0 ? 1.0 : slope; });
}

Tensor Tanh(const Tensor& x) {
  return Unary(
      x, [](double v) { return std::tanh(v); },
      [](double, double out) { return 1.0 - out * out; });
}

Tensor Sigmoid(const Tensor& x) {
  return Unary(
      x,
      [](double v) {
        if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      },
      [](double, double out) { return out * (1.0 - out); });
}

Tensor LayerNorm(const Tensor& x, const Tensor& gain, const Tensor& bias,
                 double eps) {
  const int m = x.rows(), n = x.cols();
  if (gain.rows() != 1 || gain.cols() != n || bias.rows() != 1 ||
      bias.cols() != n) {
    throw NumericError("LayerNorm: gain/bias shape mismatch for " + ShapeStr(x));
  }
  std::vector<double> normed(x.size()), inv_std(m), out(x.size());
  for (int i = 0; i < m; ++i) {
    const double* row = x.values().data() + static_cast<size_t>(i) * n;
    double mean = 0.0;
    for (int j = 0; j < n; ++j) mean += row[j];
    mean /= n;
    double var = 0.0;
    for (int j = 0; j < n; ++j) var += (row[j] - mean) * (row[j] - mean);
    var /= n;
    inv_std[i] = 1.0 / std::sqrt(var + eps);
    for (int j = 0; j < n; ++j) {
      const size_t k = static_cast<size_t>(i) * n + j;
      normed[k] = (row[j] - mean) * inv_std[i];
      out[k] = normed[k] * gain.values()[j] + bias.values()[j];
    }
  }
  return MakeResult(
      m, n, std::move(out), {x, gain, bias},
      [m, n, normed = std::move(normed), inv_std = std::move(inv_std)](
          TensorImpl& self) {
        TensorImpl& X = *self.inputs[0];
        TensorImpl& G = *self.inputs[1];
        TensorImpl& B = *self.inputs[2];
        if (G.requires_grad) {
          auto& gg = G.EnsureGrad();
          for (size_t k = 0; k < normed.size(); ++k) gg[k % n] += self.grad[k] * normed[k];
        }
        if (B.requires_grad) {
          auto& gb = B.EnsureGrad();
          for (size_t k = 0; k < normed.size(); ++k) gb[k % n] += self.grad[k];
        }
        if (X.requires_grad) {
          auto& gx = X.EnsureGrad();
          std::vector<double> dn(n);
          for (int i = 0; i < m; ++i) {
            const size_t base = static_cast<size_t>(i) * n;
            double mean_dn = 0.0, mean_dn_x = 0.0;
            for (int j = 0; j < n; ++j) {
              dn[j] = self.grad[base + j] * G.value[j];
              mean_dn += dn[j];
              mean_dn_x += dn[j] * normed[base + j];
            }
            mean_dn /= n;
            mean_dn_x /= n;
            for (int j = 0; j < n; ++j) {
              gx[base + j] +=
                  inv_std[i] * (dn[j] - mean_dn - normed[base + j] * mean_dn_x);
            }
          }
        }
      });
}

Tensor LogSoftmax(const Tensor& x) {
  const int m = x.rows(), n = x.cols();
  std::vector<double> out(x.size());
  for (int i = 0; i < m; ++i) {
    const double* row = x.values().data() + static_cast<size_t>(i) * n;
    const double mx = *std::max_element(row, row + n);
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += std::exp(row[j] - mx);
    const double lse = mx + std::log(s);
    for (int j = 0; j < n; ++j) out[static_cast<size_t>(i) * n + j] = row[j] - lse;
  }
  return MakeResult(m, n, std::move(out), {x}, [m, n](TensorImpl& self) {
    auto& g = self.inputs[0]->EnsureGrad();
    for (int i = 0; i < m; ++i) {
      const size_t base = static_cast<size_t>(i) * n;
      double total = 0.0;
      for (int j = 0; j < n; ++j) total += self.grad[base + j];
      for (int j = 0; j < n; ++j) {
        g[base + j] += self.grad[base + j] - std::exp(self.value[base + j]) * total;
      }
    }
  });
}

Tensor LogSumExp(const Tensor& x, int axis) {
  if (axis != 0 && axis != 1) throw NumericError("LogSumExp: axis must be 0 or 1");
  const int m = x.rows(), n = x.cols();
  const int outer = axis == 1 ? m : n;
  const int inner = axis == 1 ? n : m;
  auto index = [=](int o, int k) {
    return axis == 1 ? static_cast<size_t>(o) * n + k
                     : static_cast<size_t>(k) * n + o;
  };
  std::vector<double> out(outer);
  for (int o = 0; o < outer; ++o) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < inner; ++k) mx = std::max(mx, x.values()[index(o, k)]);
    double s = 0.0;
    for (int k = 0; k < inner; ++k) s += std::exp(x.values()[index(o, k)] - mx);
    out[o] = mx + std::log(s);
  }
  const int rows = axis == 1 ? m : 1;
  const int cols = axis == 1 ? 1 : n;
  return MakeResult(rows, cols, std::move(out), {x},
                    [outer, inner, index](TensorImpl& self) {
                      TensorImpl& X = *self.inputs[0];
                      auto& g = X.EnsureGrad();
                      for (int o = 0; o < outer; ++o)
                        for (int k = 0; k < inner; ++k) {
                          const size_t id = index(o, k);
                          g[id] += self.grad[o] * std::exp(X.value[id] - self.value[o]);
                        }
                    });
}

Tensor Dropout(const Tensor& x, double rate, bool train, std::mt19937_64* rng) {
  if (rate < 0.0 || rate >= 1.0) throw NumericError("Dropout: rate must be in [0,1)");
  if (!train || rate == 0.0) return x;
  std::bernoulli_distribution keep(1.0 - rate);
  const double scale = 1.0 / (1.0 - rate);
  std::vector<double> mask(x.size());
  for (double& v : mask) v = keep(*rng) ? scale : 0.0;
  std::vector<double> out(x.values());
  for (size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  return MakeResult(x.rows(), x.cols(), std::move(out), {x},
                    [mask = std::move(mask)](TensorImpl& self) {
                      auto& g = self.inputs[0]->EnsureGrad();
                      for (size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i] * mask[i];
                    });
}

GradCheckReport GradCheck(const std::function<Tensor()>& f,
                          const std::vector<NamedTensor>& params,
                          const GradCheckOptions& options) {
  if (options.epsilon <= 0.0) throw Error("GradCheck: epsilon must be positive");
  auto eval = [&] {
    NoGradGuard guard;
    return f().item();
  };
  const double f0 = eval();
  if (eval() != f0) throw Error("GradCheck: function is not deterministic");

  std::vector<NamedTensor> ps = params;
  for (auto& p : ps) p.tensor.ZeroGrad();
  Backward(f());
  std::vector<std::vector<double>> analytic;
  for (auto& p : ps) {
    std::vector<double> g = p.tensor.grad();
    if (g.empty()) g.assign(p.tensor.size(), 0.0);
    analytic.push_back(std::move(g));
  }

  GradCheckReport report;
  std::mt19937_64 rng(options.seed);
  for (size_t t = 0; t < ps.size(); ++t) {
    Tensor& tensor = ps[t].tensor;
    const size_t count = tensor.size();
    std::vector<size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    const size_t budget = options.max_entries_per_tensor;
    if (budget > 0 && count > budget) {
      const auto& a = analytic[t];
      std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
        return std::abs(a[x]) > std::abs(a[y]);
      });
      const size_t top = budget / 2;
      std::shuffle(order.begin() + top, order.end(), rng);
      order.resize(budget);
    }
    GradCheckEntry entry{ps[t].name, 0, 0.0};
    for (size_t idx : order) {
      double& v = tensor.mutable_values()[idx];
      const double saved = v;
      const double h = options.epsilon;
      auto at = [&](double offset) {
        v = saved + offset;
        return eval();
      };
      const double numeric =
          (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
      v = saved;
      const double a = analytic[t][idx];
      const double rel = std::abs(a - numeric) /
                         std::max(options.denominator_floor, std::abs(a) + std::abs(numeric));
      entry.max_rel_error = std::max(entry.max_rel_error, rel);
      ++entry.checked;
    }
    report.max_rel_error = std::max(report.max_rel_error, entry.max_rel_error);
    report.entries.push_back(std::move(entry));
  }
  report.passed = report.max_rel_error < options.tolerance;
  return report;
}

}  // namespace ad
}  // namespace frameparse
