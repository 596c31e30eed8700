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

#include "apiary/learn/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace apiary::learn {

std::size_t MlpParams::weight_offset(int layer) const {
  std::size_t off = 0;
  for (int l = 0; l < layer; ++l) {
    off += std::size_t(sizes[l]) * sizes[l + 1] + sizes[l + 1];
  }
  return off;
}

std::size_t MlpParams::param_count(std::span<const int> sizes) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    n += std::size_t(sizes[l]) * sizes[l + 1] + sizes[l + 1];
  }
  return n;
}

void MlpParams::validate() const {
  if (sizes.size() < 2) throw std::invalid_argument("mlp needs at least one layer");
  for (int s : sizes) {
    if (s <= 0) throw std::invalid_argument("mlp layer sizes must be positive");
  }
  if (data.size() != param_count(sizes)) {
    throw std::invalid_argument("mlp parameter count " + std::to_string(data.size()) +
                                " does not match layer sizes (" + std::to_string(param_count(sizes)) + ")");
  }
  for (double v : data) {
    if (!std::isfinite(v)) throw std::invalid_argument("mlp has non-finite parameters");
  }
}

MlpParams make_mlp(std::vector<int> sizes, std::mt19937_64& rng, double output_gain) {
  MlpParams p;
  p.sizes = std::move(sizes);
  p.data.assign(MlpParams::param_count(p.sizes), 0.0);
  for (int l = 0; l < p.num_layers(); ++l) {
    const int in = p.sizes[l];
    const int out = p.sizes[l + 1];
    const double gain = (l + 1 == p.num_layers()) ? output_gain : 1.0;
    std::normal_distribution<double> dist(0.0, gain / std::sqrt(double(in)));
    double* w = p.data.data() + p.weight_offset(l);
    for (int i = 0; i < in * out; ++i) w[i] = dist(rng);
  }
  p.validate();
  return p;
}

void MlpWorkspace::prepare(const MlpParams& params) {
  const auto n = params.sizes.size();
  if (act.size() == n) {
    bool same = true;
    for (std::size_t i = 0; i < n; ++i) same = same && act[i].size() == std::size_t(params.sizes[i]);
    if (same) return;
  }
  act.assign(n, {});
  grad.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    act[i].assign(params.sizes[i], 0.0);
    grad[i].assign(params.sizes[i], 0.0);
  }
}

std::span<const double> mlp_forward(const MlpParams& params, std::span<const double> input, MlpWorkspace& ws) {
  if (input.size() != std::size_t(params.input_size())) {
    throw std::invalid_argument("mlp_forward: input length " + std::to_string(input.size()) +
                                " does not match layer size " + std::to_string(params.input_size()));
  }
  ws.prepare(params);
  std::copy(input.begin(), input.end(), ws.act[0].begin());
  const int layers = params.num_layers();
  for (int l = 0; l < layers; ++l) {
    const int in = params.sizes[l];
    const int out = params.sizes[l + 1];
    const double* w = params.data.data() + params.weight_offset(l);
    const double* b = params.data.data() + params.bias_offset(l);
    const double* x = ws.act[l].data();
    double* y = ws.act[l + 1].data();
    for (int j = 0; j < out; ++j) y[j] = b[j];
    for (int k = 0; k < in; ++k) {
      const double xk = x[k];
      const double* wk = w + std::size_t(k) * out;
      for (int j = 0; j < out; ++j) y[j] += wk[j] * xk;
    }
    if (l + 1 < layers) {
      for (int j = 0; j < out; ++j) y[j] = std::tanh(y[j]);
    }
  }
  return ws.act.back();
}

std::vector<double> mlp_forward(const MlpParams& params, std::span<const double> input) {
  MlpWorkspace ws;
  auto out = mlp_forward(params, input, ws);
  return {out.begin(), out.end()};
}

void mlp_backward(const MlpParams& params, MlpWorkspace& ws, std::span<const double> grad_output,
                  std::span<double> grad_params, std::span<double> grad_input) {
  if (grad_output.size() != std::size_t(params.output_size()) || grad_params.size() != params.data.size()) {
    throw std::invalid_argument("mlp_backward: gradient shape mismatch");
  }
  const int layers = params.num_layers();
  std::copy(grad_output.begin(), grad_output.end(), ws.grad[layers].begin());
  for (int l = layers - 1; l >= 0; --l) {
    const int in = params.sizes[l];
    const int out = params.sizes[l + 1];
    double* g = ws.grad[l + 1].data();
    if (l + 1 < layers) {
      // d tanh = 1 - y^2
      const double* y = ws.act[l + 1].data();
      for (int j = 0; j < out; ++j) g[j] *= 1.0 - y[j] * y[j];
    }
    const double* w = params.data.data() + params.weight_offset(l);
    double* gw = grad_params.data() + params.weight_offset(l);
    double* gb = grad_params.data() + params.bias_offset(l);
    const double* x = ws.act[l].data();
    double* gx = ws.grad[l].data();
    for (int j = 0; j < out; ++j) gb[j] += g[j];
    const bool need_input_grad = l > 0 || !grad_input.empty();
    for (int k = 0; k < in; ++k) {
      const double xk = x[k];
      const double* wk = w + std::size_t(k) * out;
      double* gwk = gw + std::size_t(k) * out;
      double acc = 0.0;
      for (int j = 0; j < out; ++j) {
        gwk[j] += xk * g[j];
        acc += wk[j] * g[j];
      }
      if (need_input_grad) gx[k] = acc;
    }
  }
  if (!grad_input.empty()) {
    if (grad_input.size() != std::size_t(params.input_size())) {
      throw std::invalid_argument("mlp_backward: input gradient shape mismatch");
    }
    std::copy(ws.grad[0].begin(), ws.grad[0].end(), grad_input.begin());
  }
}

}  // namespace apiary::learn
