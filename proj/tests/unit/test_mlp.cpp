// Copyright 2026 The Apiary Desk Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "apiary/learn/mlp.hpp"

namespace apiary::learn {
namespace {

// Straight-line forward pass written independently of the library layout
// helpers: explicit loops over a nested weight table.
std::vector<double> reference_forward(const MlpParams& p, std::vector<double> x) {
  std::size_t off = 0;
  for (int l = 0; l < p.num_layers(); ++l) {
    const int in = p.sizes[l];
    const int out = p.sizes[l + 1];
    std::vector<double> y(out, 0.0);
    for (int j = 0; j < out; ++j) {
      double s = p.data[off + std::size_t(in) * out + j];
      for (int k = 0; k < in; ++k) s += x[k] * p.data[off + std::size_t(k) * out + j];
      y[j] = (l + 1 < p.num_layers()) ? std::tanh(s) : s;
    }
    off += std::size_t(in) * out + out;
    x = std::move(y);
  }
  return x;
}

std::vector<double> random_input(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

TEST(Mlp, ParamCountAndOffsets) {
  const std::vector<int> sizes{12, 64, 64, 6};
  EXPECT_EQ(MlpParams::param_count(sizes), 12u * 64 + 64 + 64u * 64 + 64 + 64u * 6 + 6);
  std::mt19937_64 rng(1);
  const MlpParams p = make_mlp(sizes, rng);
  EXPECT_EQ(p.data.size(), MlpParams::param_count(sizes));
  EXPECT_EQ(p.weight_offset(0), 0u);
  EXPECT_EQ(p.bias_offset(0), 12u * 64);
  EXPECT_EQ(p.weight_offset(1), 12u * 64 + 64);
}

TEST(Mlp, ZeroParamsGiveZeroOutput) {
  MlpParams p;
  p.sizes = {4, 8, 3};
  p.data.assign(MlpParams::param_count(p.sizes), 0.0);
  const auto y = mlp_forward(p, std::vector<double>{1.0, -2.0, 3.0, 0.5});
  for (double v : y) EXPECT_EQ(v, 0.0);
}

TEST(Mlp, SingleLinearLayerHasNoSquashing) {
  MlpParams p;
  p.sizes = {1, 1};
  p.data = {3.0, 0.5};
  EXPECT_DOUBLE_EQ(mlp_forward(p, std::vector<double>{2.0})[0], 6.5);
}

TEST(Mlp, MatchesReferenceForward) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const MlpParams p = make_mlp({12, 16, 9, 6}, rng, 0.7);
    const auto x = random_input(12, rng);
    const auto y = mlp_forward(p, x);
    const auto ref = reference_forward(p, x);
    ASSERT_EQ(y.size(), ref.size());
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(y[i], ref[i], 1e-12);
  }
}

TEST(Mlp, ShapeMismatchThrows) {
  std::mt19937_64 rng(3);
  const MlpParams p = make_mlp({12, 8, 6}, rng);
  EXPECT_THROW(mlp_forward(p, std::vector<double>(11, 0.0)), std::invalid_argument);
  MlpParams broken = p;
  broken.data.pop_back();
  EXPECT_THROW(broken.validate(), std::invalid_argument);
  MlpParams nonfinite = p;
  nonfinite.data[3] = std::nan("");
  EXPECT_THROW(nonfinite.validate(), std::invalid_argument);
}

TEST(Mlp, InitScalesWithFanIn) {
  std::mt19937_64 rng(9);
  const MlpParams p = make_mlp({400, 300, 2}, rng, 0.01);
  double s = 0.0;
  const std::size_t n = 400u * 300;
  for (std::size_t i = 0; i < n; ++i) s += p.data[i] * p.data[i];
  EXPECT_NEAR(s / n, 1.0 / 400, 0.05 / 400);
  for (std::size_t i = p.bias_offset(0); i < p.weight_offset(1); ++i) EXPECT_EQ(p.data[i], 0.0);
  double so = 0.0;
  for (std::size_t i = p.weight_offset(1); i < p.bias_offset(1); ++i) so += p.data[i] * p.data[i];
  EXPECT_NEAR(so / 600, 1e-4 / 300, 0.3e-4 / 300);
}

// Gradient of L = sum_j c_j * y_j against central differences, h = 1e-5.
TEST(Mlp, BackwardMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  MlpParams p = make_mlp({5, 7, 6, 3}, rng, 0.8);
  std::normal_distribution<double> g;
  for (double& v : p.data) v += 0.1 * g(rng);  // non-zero biases too
  const auto x = random_input(5, rng);
  const std::vector<double> c{0.3, -1.1, 0.7};
  auto loss = [&](const MlpParams& q, const std::vector<double>& in) {
    const auto y = mlp_forward(q, in);
    double s = 0.0;
    for (int j = 0; j < 3; ++j) s += c[j] * y[j];
    return s;
  };

  MlpWorkspace ws;
  mlp_forward(p, x, ws);
  std::vector<double> grad(p.data.size(), 0.0);
  std::vector<double> grad_in(5, 0.0);
  mlp_backward(p, ws, c, grad, grad_in);

  const double h = 1e-5;
  for (int l = 0; l < p.num_layers(); ++l) {
    double worst = 0.0;
    for (std::size_t i = p.weight_offset(l); i < p.weight_offset(l) + MlpParams::param_count(std::vector<int>{p.sizes[l], p.sizes[l + 1]}); ++i) {
      MlpParams a = p, b = p;
      a.data[i] += h;
      b.data[i] -= h;
      const double fd = (loss(a, x) - loss(b, x)) / (2 * h);
      const double rel = std::abs(fd - grad[i]) / std::max(1e-6, std::abs(fd) + std::abs(grad[i]));
      worst = std::max(worst, rel);
    }
    EXPECT_LT(worst, 1e-4) << "layer " << l;
  }
  for (int k = 0; k < 5; ++k) {
    auto a = x, b = x;
    a[k] += h;
    b[k] -= h;
    const double fd = (loss(p, a) - loss(p, b)) / (2 * h);
    EXPECT_NEAR(grad_in[k], fd, 1e-4 * std::max(1.0, std::abs(fd)));
  }
}

TEST(Mlp, BackwardAccumulates) {
  std::mt19937_64 rng(5);
  const MlpParams p = make_mlp({3, 4, 2}, rng);
  MlpWorkspace ws;
  mlp_forward(p, std::vector<double>{0.1, 0.2, 0.3}, ws);
  const std::vector<double> go{1.0, -0.5};
  std::vector<double> once(p.data.size(), 0.0), twice(p.data.size(), 0.0);
  mlp_backward(p, ws, go, once);
  mlp_backward(p, ws, go, twice);
  mlp_backward(p, ws, go, twice);
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_DOUBLE_EQ(twice[i], 2 * once[i]);
}

}  // namespace
}  // namespace apiary::learn
