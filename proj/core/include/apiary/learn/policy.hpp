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

#include <array>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "apiary/actuation.hpp"
#include "apiary/env.hpp"
#include "apiary/learn/mlp.hpp"

namespace apiary::learn {

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 1.0;

/// Fixed observation scales: network input = observation / scale.
struct ObsScale {
  double position = 1.0;                  // m
  double rotation = std::numbers::pi;     // rad
  double velocity = 0.5;                  // m/s
  double angular_velocity = 0.5;          // rad/s
  friend bool operator==(const ObsScale&, const ObsScale&) = default;
};

/// Gaussian actor with a state-independent log-std, plus a value critic.
struct ActorCritic {
  MlpParams actor;               // obs -> action mean
  std::vector<double> log_std;   // one per action dimension
  MlpParams critic;              // obs -> value
  ObsScale scale;
  ObsFrame frame = ObsFrame::kWorld;

  static ActorCritic create(const std::vector<int>& hidden, double init_log_std, std::uint64_t seed,
                            ObsFrame frame = ObsFrame::kWorld);

  std::array<double, kObsDim> normalize(const Observation& obs) const;
  void clamp_log_std();
  /// Shapes chain 12 -> ... -> 6 and 12 -> ... -> 1; log-std within bounds.
  void validate() const;

  friend bool operator==(const ActorCritic&, const ActorCritic&) = default;
};

struct PolicyStep {
  std::array<double, kActionDim> action{};
  std::array<double, kActionDim> mean{};
  double log_prob = 0.0;
  double value = 0.0;
};

/// Diagonal Gaussian log-density of `action`.
double gaussian_log_prob(std::span<const double> mean, std::span<const double> log_std,
                         std::span<const double> action);

/// Differential entropy of the diagonal Gaussian.
double gaussian_entropy(std::span<const double> log_std);

/// action = mean + exp(log_std) * eps with eps ~ N(0, I). In deterministic
/// mode the mean is returned and rng is left untouched. `input` must already
/// be normalized.
PolicyStep policy_sample(const ActorCritic& policy, std::span<const double, kObsDim> input,
                         std::mt19937_64& rng, bool deterministic = false);
PolicyStep policy_sample(const ActorCritic& policy, const Observation& obs, std::mt19937_64& rng,
                         bool deterministic = false);

/// Deterministic action for an observation.
std::array<double, kActionDim> policy_action(const ActorCritic& policy, const Observation& obs);

}  // namespace apiary::learn
