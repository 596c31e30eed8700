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
#include "apiary/dynamics.hpp"
#include "apiary/math3d.hpp"

namespace apiary {

namespace learn {
struct ActorCritic;
struct RolloutBuffer;
}  // namespace learn

inline constexpr int kObsDim = 12;

struct EpisodeGoal {
  Vec3 position;
  Quat attitude;
  friend bool operator==(const EpisodeGoal&, const EpisodeGoal&) = default;
};

/// Error-and-twist observation, laid out as
/// [pos_err, ori_err, lin_vel, ang_vel].
struct Observation {
  Vec3 pos_err;  // m
  Vec3 ori_err;  // rad, rotation vector
  Vec3 lin_vel;  // m/s
  Vec3 ang_vel;  // rad/s

  std::array<double, kObsDim> to_array() const;
  bool is_finite() const {
    return pos_err.is_finite() && ori_err.is_finite() && lin_vel.is_finite() && ang_vel.is_finite();
  }
  friend bool operator==(const Observation&, const Observation&) = default;
};

struct RewardWeights {
  double w_pos = 10.0;        // 1/m
  double w_ori = 5.0;         // 1/rad
  double w_linvel = 0.05;     // s/m
  double w_angvel = 0.05;     // s/rad
  double bonus_success = 10.0;
  double penalty_oob = 10.0;

  void validate() const;
  friend bool operator==(const RewardWeights&, const RewardWeights&) = default;
};

/// Frame the error and twist components are expressed in.
enum class ObsFrame { kWorld, kBody };

struct EnvConfig {
  Vec3 goal_pos_range{0.5, 0.5, 0.5};  // +/- m per axis
  Vec3 goal_ang_range{std::numbers::pi / 6, std::numbers::pi / 6, std::numbers::pi / 6};  // +/- rad
  double mass_min = 0.75;  // fraction of nominal
  double mass_max = 1.25;
  int episode_len = 1875;  // steps
  double success_pos_tol = 0.05;                       // m
  double success_ori_tol = 5.0 * std::numbers::pi / 180;  // rad
  double success_vel_tol = 0.05;                       // m/s
  double success_angvel_tol = 0.05;                    // rad/s
  int hold_steps = 25;
  double oob_radius = 2.0;  // m
  double dt = 0.016;        // s
  DofMask mask = DofMask::full_6dof();
  ObsFrame obs_frame = ObsFrame::kWorld;
  BodyParams body;          // nominal
  ActuationLimits limits;

  void validate() const;
  friend bool operator==(const EnvConfig&, const EnvConfig&) = default;
};

/// Stable 64-bit fingerprint of every field that shapes the task.
std::uint64_t env_config_hash(const EnvConfig& config);

struct EpisodeInit {
  RigidState state;
  EpisodeGoal goal;
  BodyParams params;
};

/// Start at rest at the origin with identity attitude; goal position and
/// goal rotation vector uniform per free axis; mass (and inertia, scaled
/// with it) uniform in [mass_min, mass_max] x nominal. Deterministic in seed.
EpisodeInit reset(const EnvConfig& config, std::uint64_t seed);

Observation observe(const RigidState& state, const EpisodeGoal& goal, ObsFrame frame = ObsFrame::kWorld);

/// Instantaneous success: every error and twist magnitude under tolerance.
bool within_success(const Observation& obs, const EnvConfig& config);
bool out_of_bounds(const Observation& obs, const EnvConfig& config);

/// Error-reduction shaping minus twist penalties, plus the success bonus on
/// ticks where the success condition holds and the out-of-bounds penalty.
double reward(const Observation& prev, const Observation& obs, const RewardWeights& weights,
              const EnvConfig& config);

/// Everything that evolves within one episode.
struct Episode {
  RigidState state;
  EpisodeGoal goal;
  BodyParams params;
  Observation obs;
  Wrench last_wrench;
  int steps = 0;
  int hold = 0;  // consecutive ticks inside the success region
};

Episode start_episode(const EnvConfig& config, std::uint64_t seed);

struct StepInfo {
  bool success = false;  // success held for hold_steps
  bool out_of_bounds = false;
  bool timeout = false;
  Wrench commanded;  // denormalized, pre-clamp
  Wrench applied;
};

struct StepResult {
  Episode next;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

/// denormalize -> clamp -> dynamics -> observe -> reward -> termination.
StepResult env_step(const Episode& episode, std::span<const double, kActionDim> action,
                    const EnvConfig& config, const RewardWeights& weights);

/// Seeds an independent stream for a given environment index and purpose.
std::mt19937_64 derive_stream(std::uint64_t master_seed, std::uint64_t index, std::uint64_t purpose);

struct EpisodeRecord {
  double episode_return = 0.0;
  bool success = false;
  int length = 0;
};

/// A batch of independent environments that keep their episodes alive
/// across successive collect() calls and auto-reset on termination.
class VecEnv {
 public:
  VecEnv(const EnvConfig& config, const RewardWeights& weights, int n_envs, std::uint64_t seed);

  /// Advances every environment `horizon` steps under the stochastic policy
  /// and fills `buffer` (resized as needed). Sharded over `workers`
  /// threads; the buffer contents do not depend on the worker count.
  void collect(const learn::ActorCritic& policy, int horizon, int workers, learn::RolloutBuffer& buffer);

  int size() const { return static_cast<int>(slots_.size()); }
  const Episode& episode(int i) const { return slots_[i].episode; }

  /// Episodes finished since the last call, in (env index, time) order.
  std::vector<EpisodeRecord> take_finished();

 private:
  struct Slot {
    Episode episode;
    std::mt19937_64 reset_rng;
    std::mt19937_64 action_rng;
    double running_return = 0.0;
    std::vector<EpisodeRecord> finished;
  };

  EnvConfig config_;
  RewardWeights weights_;
  std::vector<Slot> slots_;
};

/// One-shot rollout from freshly seeded environments.
learn::RolloutBuffer batch_rollout(const learn::ActorCritic& policy, int n_envs, int horizon,
                                   const EnvConfig& config, const RewardWeights& weights,
                                   std::uint64_t seed, int workers = 1);

}  // namespace apiary
