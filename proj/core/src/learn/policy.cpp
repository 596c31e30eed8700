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

#include "apiary/learn/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace apiary::learn {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

struct Workspaces {
  MlpWorkspace actor;
  MlpWorkspace critic;
};

Workspaces& thread_workspaces() {
  thread_local Workspaces ws;
  return ws;
}

}  // namespace

ActorCritic ActorCritic::create(const std::vector<int>& hidden, double init_log_std, std::uint64_t seed,
                                ObsFrame frame) {
  std::mt19937_64 rng(seed);
  std::vector<int> actor_sizes{kObsDim};
  actor_sizes.insert(actor_sizes.end(), hidden.begin(), hidden.end());
  std::vector<int> critic_sizes = actor_sizes;
  actor_sizes.push_back(kActionDim);
  critic_sizes.push_back(1);

  ActorCritic ac;
  // Small output gain keeps the initial mean action near zero.
  ac.actor = make_mlp(actor_sizes, rng, 0.01);
  ac.critic = make_mlp(critic_sizes, rng, 1.0);
  ac.log_std.assign(kActionDim, init_log_std);
  ac.frame = frame;
  ac.clamp_log_std();
  return ac;
}

std::array<double, kObsDim> ActorCritic::normalize(const Observation& obs) const {
  const auto raw = obs.to_array();
  std::array<double, kObsDim> out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = raw[i] / scale.position;
    out[3 + i] = raw[3 + i] / scale.rotation;
    out[6 + i] = raw[6 + i] / scale.velocity;
    out[9 + i] = raw[9 + i] / scale.angular_velocity;
  }
  return out;
}

void ActorCritic::clamp_log_std() {
  for (double& v : log_std) v = std::clamp(v, kLogStdMin, kLogStdMax);
}

void ActorCritic::validate() const {
  actor.validate();
  critic.validate();
  if (actor.input_size() != kObsDim || critic.input_size() != kObsDim) {
    throw std::invalid_argument("policy networks must take a 12-dim observation");
  }
  if (actor.output_size() != kActionDim || critic.output_size() != 1) {
    throw std::invalid_argument("actor must emit 6 action means and critic one value");
  }
  if (log_std.size() != std::size_t(kActionDim)) throw std::invalid_argument("log-std must have 6 entries");
  for (double v : log_std) {
    if (!(v >= kLogStdMin && v <= kLogStdMax)) throw std::invalid_argument("log-std out of bounds");
  }
  if (!(scale.position > 0 && scale.rotation > 0 && scale.velocity > 0 && scale.angular_velocity > 0)) {
    throw std::invalid_argument("observation scales must be positive");
  }
}

double gaussian_log_prob(std::span<const double> mean, std::span<const double> log_std,
                         std::span<const double> action) {
  double lp = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double z = (action[i] - mean[i]) * std::exp(-log_std[i]);
    lp += -0.5 * z * z - log_std[i] - 0.5 * kLog2Pi;
  }
  return lp;
}

double gaussian_entropy(std::span<const double> log_std) {
  double h = 0.0;
  for (double s : log_std) h += s + 0.5 * (kLog2Pi + 1.0);
  return h;
}

PolicyStep policy_sample(const ActorCritic& policy, std::span<const double, kObsDim> input,
                         std::mt19937_64& rng, bool deterministic) {
  Workspaces& ws = thread_workspaces();
  PolicyStep out;
  const auto mean = mlp_forward(policy.actor, input, ws.actor);
  std::copy(mean.begin(), mean.end(), out.mean.begin());
  out.value = mlp_forward(policy.critic, input, ws.critic)[0];
  if (deterministic) {
    out.action = out.mean;
  } else {
    for (int i = 0; i < kActionDim; ++i) {
      std::normal_distribution<double> n01(0.0, 1.0);
      out.action[i] = out.mean[i] + std::exp(policy.log_std[i]) * n01(rng);
    }
  }
  out.log_prob = gaussian_log_prob(out.mean, policy.log_std, out.action);
  return out;
}

PolicyStep policy_sample(const ActorCritic& policy, const Observation& obs, std::mt19937_64& rng,
                         bool deterministic) {
  const auto input = policy.normalize(obs);
  return policy_sample(policy, std::span<const double, kObsDim>(input), rng, deterministic);
}

std::array<double, kActionDim> policy_action(const ActorCritic& policy, const Observation& obs) {
  const auto input = policy.normalize(obs);
  Workspaces& ws = thread_workspaces();
  const auto mean = mlp_forward(policy.actor, input, ws.actor);
  std::array<double, kActionDim> a{};
  std::copy(mean.begin(), mean.end(), a.begin());
  return a;
}

}  // namespace apiary::learn
