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

#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace apiary::learn {

/// Fully connected tanh network with a linear output layer.
///
/// All parameters live in one flat array. Layer l stores its weights
/// input-major (W[k][j] at k * out + j, k over inputs) followed by its
/// bias; layers follow each other in order.
struct MlpParams {
  std::vector<int> sizes;     // input, hidden..., output
  std::vector<double> data;

  int num_layers() const { return static_cast<int>(sizes.size()) - 1; }
  int input_size() const { return sizes.front(); }
  int output_size() const { return sizes.back(); }

  std::size_t weight_offset(int layer) const;
  std::size_t bias_offset(int layer) const { return weight_offset(layer) + std::size_t(sizes[layer]) * sizes[layer + 1]; }

  static std::size_t param_count(std::span<const int> sizes);

  /// Throws std::invalid_argument on a broken shape chain or non-finite data.
  void validate() const;

  friend bool operator==(const MlpParams&, const MlpParams&) = default;
};

/// Weights ~ N(0, gain^2 / fan_in) with `output_gain` on the last layer;
/// biases zero.
MlpParams make_mlp(std::vector<int> sizes, std::mt19937_64& rng, double output_gain = 1.0);

/// Per-layer activations kept for the backward pass. act[0] is the input and
/// act[l + 1] the output of layer l (post-tanh for hidden layers).
struct MlpWorkspace {
  std::vector<std::vector<double>> act;
  std::vector<std::vector<double>> grad;

  void prepare(const MlpParams& params);
};

/// Forward pass into `ws`; returns a view of the output.
/// Throws std::invalid_argument if the input length does not match.
std::span<const double> mlp_forward(const MlpParams& params, std::span<const double> input, MlpWorkspace& ws);
std::vector<double> mlp_forward(const MlpParams& params, std::span<const double> input);

/// Backward pass for the activations currently in `ws`. Parameter gradients
/// are accumulated (added) into grad_params; the input gradient is written
/// to grad_input when it is non-empty.
void mlp_backward(const MlpParams& params, MlpWorkspace& ws, std::span<const double> grad_output,
                  std::span<double> grad_params, std::span<double> grad_input = {});

}  // namespace apiary::learn
