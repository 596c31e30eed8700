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
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "apiary/learn/policy.hpp"
#include "apiary/learn/rollout.hpp"

namespace apiary::learn {

struct PpoConfig {
  double gamma = 0.99;
  double lam = 0.95;
  double clip_eps = 0.2;
  double lr = 3e-4;
  int epochs_per_update = 4;
  int minibatch_size = 256;
  double value_coef = 0.5;
  double entropy_coef = 0.0;
  double max_grad_norm = 0.5;
  long long total_env_steps = 3'000'000;
  int n_envs = 64;
  int horizon = 256;
  std::vector<int> hidden{64, 64};
  double init_log_std = 0.0;
  /// Linear learning-rate decay to zero over the run.
  bool lr_anneal = true;
  /// Deterministic evaluation every this many updates (and after the last).
  int eval_interval = 10;
  int eval_episodes = 100;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  long long batch_size() const { return static_cast<long long>(n_envs) * horizon; }
  friend bool operator==(const PpoConfig&, const PpoConfig&) = default;
};

/// Generalized advantage estimation over one environment's trajectory.
/// A done flag at t cuts both the bootstrap and the recursion at t.
void gae(std::span<const double> rewards, std::span<const double> values, std::span<const std::uint8_t> dones,
         double bootstrap, double gamma, double lam, std::span<double> advantages, std::span<double> returns);

/// Runs gae() per environment and stores advantages/returns in the buffer.
void compute_advantages(RolloutBuffer& buffer, double gamma, double lam);

/// Zero mean, unit (population) std. A constant input maps to zeros.
std::vector<double> normalize_advantages(std::span<const double> adv);

/// Gradient storage shaped like the trainable parameters.
struct ParamGrad {
  std::vector<double> actor;
  std::vector<double> log_std;
  std::vector<double> critic;

  static ParamGrad zeros_like(const ActorCritic& policy);
  void set_zero();
  double global_norm() const;
  void scale(double s);
  bool is_finite() const;
};

struct LossTerms {
  double total = 0.0;
  double policy = 0.0;      // clipped surrogate, sign as minimized
  double value = 0.0;       // mean squared value error (before value_coef)
  double entropy = 0.0;
  double approx_kl = 0.0;   // mean((r - 1) - log r)
  double clip_fraction = 0.0;
};

/// Loss and its analytic gradient on the samples `indices` of `buffer`,
/// using `advantages` (one per index, already normalized). The gradient is
/// written (not accumulated) into `grad`.
LossTerms ppo_loss_and_grad(const ActorCritic& policy, const RolloutBuffer& buffer,
                            std::span<const std::size_t> indices, std::span<const double> advantages,
                            const PpoConfig& config, ParamGrad& grad);

/// Loss only, same definition as ppo_loss_and_grad.
LossTerms ppo_loss(const ActorCritic& policy, const RolloutBuffer& buffer, std::span<const std::size_t> indices,
                   std::span<const double> advantages, const PpoConfig& config);

/// Adam with bias correction.
class Adam {
 public:
  explicit Adam(const ActorCritic& policy, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  void step(ActorCritic& policy, const ParamGrad& grad, double lr);

  long long steps() const { return t_; }
  const ParamGrad& first_moment() const { return m_; }
  const ParamGrad& second_moment() const { return v_; }
  void restore(long long t, ParamGrad m, ParamGrad v);

 private:
  double beta1_;
  double beta2_;
  double eps_;
  long long t_ = 0;
  ParamGrad m_;
  ParamGrad v_;
};

struct UpdateStats {
  LossTerms loss;       // averaged over minibatches
  double grad_norm = 0.0;  // mean pre-clip global norm
  int minibatches = 0;
};

/// Epochs x shuffled minibatches of clipped-surrogate updates. Advantages
/// are normalized per minibatch. Throws NumericalError naming the minibatch
/// on a non-finite loss or gradient; the policy is left at its last finite
/// state in that case.
UpdateStats ppo_update(ActorCritic& policy, Adam& optimizer, const RolloutBuffer& buffer, const PpoConfig& config,
                       std::mt19937_64& shuffle_rng, double lr);

}  // namespace apiary::learn
