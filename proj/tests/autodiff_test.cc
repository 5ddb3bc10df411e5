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

#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

#include "frameparse/errors.h"

namespace frameparse::ad {
namespace {

Tensor RandomTensor(int rows, int cols, std::mt19937_64* rng, bool grad = true) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(static_cast<size_t>(rows) * cols);
  for (double& x : v) x = d(*rng);
  return Tensor::FromValues(rows, cols, v, grad);
}

// Weighted sum so that every output entry gets a distinct upstream gradient.
Tensor Project(const Tensor& y, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Tensor w = RandomTensor(y.rows(), y.cols(), &rng, false);
  return Sum(Mul(y, w));
}

void ExpectGradOk(const std::function<Tensor()>& f, const std::vector<NamedTensor>& params) {
  const GradCheckReport r = GradCheck(f, params);
  EXPECT_TRUE(r.passed) << "max rel error " << r.max_rel_error;
  EXPECT_LT(r.max_rel_error, 1e-6);
}

class OpGradients : public ::testing::Test {
 protected:
  std::mt19937_64 rng_{17};
};

TEST_F(OpGradients, MatMulTransposeAddSubMul) {
  Tensor a = RandomTensor(3, 4, &rng_), b = RandomTensor(4, 2, &rng_);
  Tensor c = RandomTensor(3, 2, &rng_);
  ExpectGradOk([&] { return Project(Mul(Sub(MatMul(a, b), c), Add(c, c)), 1); },
               {{"a", a}, {"b", b}, {"c", c}});
  ExpectGradOk([&] { return Project(Transpose(a), 2); }, {{"a", a}});
}

TEST_F(OpGradients, RowOpsAndScalars) {
  Tensor x = RandomTensor(3, 4, &rng_), row = RandomTensor(1, 4, &rng_);
  ExpectGradOk([&] { return Project(AddScalar(Scale(AddRow(x, row), -1.5), 0.3), 3); },
               {{"x", x}, {"row", row}});
  ExpectGradOk([&] { return Project(AddConstant(x, std::vector<double>(12, 2.0)), 4); },
               {{"x", x}});
}

TEST_F(OpGradients, ConcatSliceGather) {
  Tensor x = RandomTensor(4, 3, &rng_), y = RandomTensor(2, 3, &rng_);
  Tensor z = RandomTensor(4, 2, &rng_);
  ExpectGradOk([&] { return Project(ConcatRows({x, y}), 5); }, {{"x", x}, {"y", y}});
  ExpectGradOk([&] { return Project(ConcatCols({x, z}), 6); }, {{"x", x}, {"z", z}});
  ExpectGradOk([&] { return Project(SliceRows(x, 1, 2), 7); }, {{"x", x}});
  ExpectGradOk([&] { return Project(SliceCols(x, 1, 2), 8); }, {{"x", x}});
  ExpectGradOk([&] { return Project(RowSelect(x, {3, 0, 3}), 9); }, {{"x", x}});
  ExpectGradOk([&] { return Project(GatherSum(x, {{0, 1}, {2}, {1, 1, 3}}), 10); },
               {{"x", x}});
  ExpectGradOk([&] { return Project(SumRows(x, {0, 2}), 11); }, {{"x", x}});
  ExpectGradOk([&] { return Add(Pick(x, 2, 1), Sum(x)); }, {{"x", x}});
}

TEST_F(OpGradients, Nonlinearities) {
  Tensor x = RandomTensor(3, 5, &rng_);
  ExpectGradOk([&] { return Project(Relu(x), 12); }, {{"x", x}});
  ExpectGradOk([&] { return Project(LeakyRelu(x, 0.01), 13); }, {{"x", x}});
  ExpectGradOk([&] { return Project(Tanh(x), 14); }, {{"x", x}});
  ExpectGradOk([&] { return Project(Sigmoid(x), 15); }, {{"x", x}});
}

TEST_F(OpGradients, NormalisationAndReductions) {
  Tensor x = RandomTensor(3, 5, &rng_);
  Tensor g = RandomTensor(1, 5, &rng_), b = RandomTensor(1, 5, &rng_);
  ExpectGradOk([&] { return Project(LayerNorm(x, g, b), 16); },
               {{"x", x}, {"g", g}, {"b", b}});
  ExpectGradOk([&] { return Project(LogSoftmax(x), 17); }, {{"x", x}});
  ExpectGradOk([&] { return Project(LogSumExp(x, 0), 18); }, {{"x", x}});
  ExpectGradOk([&] { return Project(LogSumExp(x, 1), 19); }, {{"x", x}});
}

TEST(Forward, LayerNormMatchesDefinition) {
  const Tensor x = Tensor::FromValues(1, 4, {1, 2, 3, 4});
  const Tensor y = LayerNorm(x, Tensor::FromValues(1, 4, {1, 1, 1, 1}),
                             Tensor::Zeros(1, 4));
  const double var = 1.25;
  for (int c = 0; c < 4; ++c) {
    EXPECT_NEAR(y.at(0, c), (c + 1 - 2.5) / std::sqrt(var + kLayerNormEpsilon), 1e-12);
  }
}

TEST(Forward, LogSumExpIsStable) {
  const Tensor x = Tensor::FromValues(1, 3, {1000, 1000, 1000});
  EXPECT_NEAR(LogSumExp(x, 1).item(), 1000 + std::log(3.0), 1e-9);
  const Tensor ls = LogSoftmax(Tensor::FromValues(1, 2, {-1e4, 0}));
  EXPECT_NEAR(std::exp(ls.at(0, 0)) + std::exp(ls.at(0, 1)), 1.0, 1e-12);
}

TEST(Backward, AccumulatesAcrossPasses) {
  Tensor x = Tensor::FromValues(1, 1, {3.0}, true);
  Backward(Mul(x, x));
  EXPECT_DOUBLE_EQ(x.grad()[0], 6.0);
  Backward(Mul(x, x));
  EXPECT_DOUBLE_EQ(x.grad()[0], 12.0);
  x.ZeroGrad();
  Backward(Scale(x, 2.0));
  EXPECT_DOUBLE_EQ(x.grad()[0], 2.0);
}

TEST(Backward, SharedSubgraphVisitedOnce) {
  Tensor x = Tensor::FromValues(1, 1, {2.0}, true);
  const Tensor y = Mul(x, x);
  Backward(Add(y, y));  // d/dx 2x^2 = 4x
  EXPECT_DOUBLE_EQ(x.grad()[0], 8.0);
}

TEST(NoGrad, SkipsRecording) {
  Tensor x = Tensor::FromValues(1, 1, {2.0}, true);
  Tensor y;
  {
    NoGradGuard guard;
    EXPECT_FALSE(GradEnabled());
    y = Mul(x, x);
  }
  EXPECT_TRUE(GradEnabled());
  EXPECT_FALSE(y.requires_grad());
}

TEST(Errors, ShapeMismatchAndNonFinite) {
  const Tensor a = Tensor::Zeros(2, 3), b = Tensor::Zeros(2, 3);
  EXPECT_THROW(MatMul(a, b), NumericError);
  EXPECT_THROW(Add(a, Tensor::Zeros(3, 2)), NumericError);
  EXPECT_THROW(Scale(Tensor::Scalar(1e300), 1e300), NumericError);
}

TEST(Dropout, IdentityWhenEvaluatingAndUnbiasedWhenTraining) {
  std::mt19937_64 rng(1);
  const Tensor x = Tensor::FromValues(1, 20000, std::vector<double>(20000, 1.0));
  EXPECT_EQ(Dropout(x, 0.3, false, &rng).values(), x.values());
  const Tensor y = Dropout(x, 0.3, true, &rng);
  double mean = 0;
  int zeros = 0;
  for (double v : y.values()) {
    mean += v;
    zeros += v == 0.0;
    if (v != 0.0) {
      EXPECT_NEAR(v, 1.0 / 0.7, 1e-12);
    }
  }
  EXPECT_NEAR(mean / 20000, 1.0, 0.03);
  EXPECT_NEAR(zeros / 20000.0, 0.3, 0.02);
}

TEST(GradCheck, DetectsWrongGradient) {
  Tensor x = Tensor::FromValues(1, 2, {0.8, -0.3}, true);
  // Claims d/dx = 1 for x^2.
  auto f = [&] {
    return MakeResult(1, 1, {x.values()[0] * x.values()[0] + x.values()[1]}, {x},
                      [x](TensorImpl& out) mutable {
                        x.mutable_grad()[0] += out.grad[0];
                        x.mutable_grad()[1] += out.grad[0];
                      });
  };
  const GradCheckReport r = GradCheck(f, {{"x", x}});
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.max_rel_error, 0.1);
}

}  // namespace
}  // namespace frameparse::ad
