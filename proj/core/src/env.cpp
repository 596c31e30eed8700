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

#include "apiary/env.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "apiary/error.hpp"
#include "apiary/learn/policy.hpp"
#include "apiary/learn/rollout.hpp"
#include "apiary/parallel.hpp"

namespace apiary {

std::array<double, kObsDim> Observation::to_array() const {
  return {pos_err.x, pos_err.y, pos_err.z, ori_err.x, ori_err.y, ori_err.z,
          lin_vel.x, lin_vel.y, lin_vel.z, ang_vel.x, ang_vel.y, ang_vel.z};
}

void RewardWeights::validate() const {
  if (!(w_pos >= 0 && w_ori >= 0 && w_linvel >= 0 && w_angvel >= 0)) {
    throw std::invalid_argument("reward weights must be non-negative");
  }
  if (!std::isfinite(bonus_success) || !std::isfinite(penalty_oob)) {
    throw std::invalid_argument("reward bonus/penalty must be finite");
  }
}

void EnvConfig::validate() const {
  for (int i = 0; i < 3; ++i) {
    if (!(goal_pos_range[i] >= 0) || !(goal_ang_range[i] >= 0)) {
      throw std::invalid_argument("goal ranges must be non-negative");
    }
  }
  if (!(mass_min > 0 && mass_max >= mass_min && std::isfinite(mass_max))) {
    throw std::invalid_argument("mass range must lie in (0, inf) with min <= max");
  }
  if (episode_len <= 0 || hold_steps <= 0) throw std::invalid_argument("episode_len and hold_steps must be positive");
  if (!(success_pos_tol > 0 && success_ori_tol > 0 && success_vel_tol > 0 && success_angvel_tol > 0)) {
    throw std::invalid_argument("success tolerances must be positive");
  }
  if (!(oob_radius > 0)) throw std::invalid_argument("oob_radius must be positive");
  if (!(dt > 0 && dt <= 0.5)) throw std::invalid_argument("dt must be in (0, 0.5]");
  body.validate();
  limits.validate();
}

namespace {

// FNV-1a over the raw bytes of each field.
class Fnv1a {
 public:
  void add(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  void add(double v) { add(&v, sizeof v); }
  void add(int v) { add(static_cast<double>(v)); }
  void add(bool v) { add(v ? 1.0 : 0.0); }
  void add(const Vec3& v) {
    add(v.x);
    add(v.y);
    add(v.z);
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t env_config_hash(const EnvConfig& c) {
  Fnv1a h;
  h.add(c.goal_pos_range);
  h.add(c.goal_ang_range);
  h.add(c.mass_min);
  h.add(c.mass_max);
  h.add(c.episode_len);
  h.add(c.success_pos_tol);
  h.add(c.success_ori_tol);
  h.add(c.success_vel_tol);
  h.add(c.success_angvel_tol);
  h.add(c.hold_steps);
  h.add(c.oob_radius);
  h.add(c.dt);
  for (int i = 0; i < 3; ++i) {
    h.add(c.mask.free_translation[i]);
    h.add(c.mask.free_rotation[i]);
  }
  h.add(c.obs_frame == ObsFrame::kBody);
  h.add(c.body.mass);
  h.add(c.body.inertia_diag);
  h.add(c.body.com_offset);
  h.add(c.limits.f_max);
  h.add(c.limits.tau_max);
  h.add(c.limits.force_rate.value_or(0.0));
  h.add(c.limits.torque_rate.value_or(0.0));
  return h.value();
}

std::mt19937_64 derive_stream(std::uint64_t master_seed, std::uint64_t index, std::uint64_t purpose) {
  return std::mt19937_64(mix(mix(mix(master_seed) ^ index) ^ (purpose * 0x2545f4914f6cdd1dULL)));
}

EpisodeInit reset(const EnvConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(mix(seed));
  auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  };

  EpisodeInit init;
  init.state = RigidState{};
  // Draw every component even on constrained axes so the stream layout does
  // not depend on the mask.
  Vec3 pos;
  Vec3 rotvec;
  for (int i = 0; i < 3; ++i) {
    const double p = uniform(-config.goal_pos_range[i], config.goal_pos_range[i]);
    pos[i] = config.mask.free_translation[i] ? p : 0.0;
  }
  for (int i = 0; i < 3; ++i) {
    const double a = uniform(-config.goal_ang_range[i], config.goal_ang_range[i]);
    rotvec[i] = config.mask.free_rotation[i] ? a : 0.0;
  }
  const double mass_factor = uniform(config.mass_min, config.mass_max);

  init.goal.position = pos;
  init.goal.attitude = quat_from_rotvec(rotvec);
  init.params = config.body;
  init.params.mass = config.body.mass * mass_factor;
  init.params.inertia_diag = config.body.inertia_diag * mass_factor;
  return init;
}

Observation observe(const RigidState& state, const EpisodeGoal& goal, ObsFrame frame) {
  Observation obs;
  const Vec3 pos_err = goal.position - state.position;
  const Vec3 ori_err = quat_error(goal.attitude, state.attitude);
  if (frame == ObsFrame::kWorld) {
    obs.pos_err = pos_err;
    obs.ori_err = ori_err;
    obs.lin_vel = state.lin_vel;
    obs.ang_vel = rotate(state.attitude, state.ang_vel);
  } else {
    obs.pos_err = rotate_inverse(state.attitude, pos_err);
    obs.ori_err = rotate_inverse(state.attitude, ori_err);
    obs.lin_vel = rotate_inverse(state.attitude, state.lin_vel);
    obs.ang_vel = state.ang_vel;
  }
  return obs;
}

bool within_success(const Observation& obs, const EnvConfig& config) {
  return obs.pos_err.norm() < config.success_pos_tol && obs.ori_err.norm() < config.success_ori_tol &&
         obs.lin_vel.norm() < config.success_vel_tol && obs.ang_vel.norm() < config.success_angvel_tol;
}

bool out_of_bounds(const Observation& obs, const EnvConfig& config) {
  return obs.pos_err.norm() > config.oob_radius;
}

double reward(const Observation& prev, const Observation& obs, const RewardWeights& w, const EnvConfig& config) {
  double r = w.w_pos * (prev.pos_err.norm() - obs.pos_err.norm()) +
             w.w_ori * (prev.ori_err.norm() - obs.ori_err.norm()) - w.w_linvel * obs.lin_vel.norm() -
             w.w_angvel * obs.ang_vel.norm();
  if (within_success(obs, config)) r += w.bonus_success;
  if (out_of_bounds(obs, config)) r -= w.penalty_oob;
  return r;
}

Episode start_episode(const EnvConfig& config, std::uint64_t seed) {
  const EpisodeInit init = reset(config, seed);
  Episode ep;
  ep.state = init.state;
  ep.goal = init.goal;
  ep.params = init.params;
  ep.obs = observe(ep.state, ep.goal, config.obs_frame);
  return ep;
}

StepResult env_step(const Episode& episode, std::span<const double, kActionDim> action, const EnvConfig& config,
                    const RewardWeights& weights) {
  StepResult out;
  for (int i = 0; i < 3; ++i) {
    out.info.commanded.force[i] = action[i] * config.limits.f_max;
    out.info.commanded.torque[i] = action[i + 3] * config.limits.tau_max;
  }
  out.info.applied =
      apply_limits(episode.last_wrench, denormalize_action(action, config.limits), config.limits, config.dt);

  Episode& next = out.next;
  next = episode;
  next.state = step(episode.state, out.info.applied, episode.params, config.mask, config.dt);
  next.obs = observe(next.state, next.goal, config.obs_frame);
  next.last_wrench = out.info.applied;
  next.steps = episode.steps + 1;
  next.hold = within_success(next.obs, config) ? episode.hold + 1 : 0;

  out.reward = reward(episode.obs, next.obs, weights, config);
  out.info.success = next.hold >= config.hold_steps;
  out.info.out_of_bounds = out_of_bounds(next.obs, config);
  out.info.timeout = next.steps >= config.episode_len;
  out.done = out.info.success || out.info.out_of_bounds || out.info.timeout;
  return out;
}

VecEnv::VecEnv(const EnvConfig& config, const RewardWeights& weights, int n_envs, std::uint64_t seed)
    : config_(config), weights_(weights) {
  if (n_envs < 1) throw std::invalid_argument("VecEnv needs at least one environment");
  config_.validate();
  weights_.validate();
  slots_.resize(n_envs);
  for (int i = 0; i < n_envs; ++i) {
    Slot& s = slots_[i];
    s.reset_rng = derive_stream(seed, i, 1);
    s.action_rng = derive_stream(seed, i, 2);
    s.episode = start_episode(config_, s.reset_rng());
  }
}

void VecEnv::collect(const learn::ActorCritic& policy, int horizon, int workers, learn::RolloutBuffer& buffer) {
  if (horizon < 1) throw std::invalid_argument("rollout horizon must be positive");
  buffer.resize(size(), horizon);
  parallel_for(slots_.size(), workers, [&](std::size_t e) {
    Slot& s = slots_[e];
    try {
      for (int t = 0; t < horizon; ++t) {
        const std::size_t k = buffer.index(int(e), t);
        const auto input = policy.normalize(s.episode.obs);
        const learn::PolicyStep ps =
            learn::policy_sample(policy, std::span<const double, kObsDim>(input), s.action_rng);
        std::copy(input.begin(), input.end(), buffer.obs.begin() + k * kObsDim);
        std::copy(ps.action.begin(), ps.action.end(), buffer.actions.begin() + k * kActionDim);
        buffer.log_probs[k] = ps.log_prob;
        buffer.values[k] = ps.value;

        StepResult r = env_step(s.episode, std::span<const double, kActionDim>(ps.action), config_, weights_);
        buffer.rewards[k] = r.reward;
        buffer.dones[k] = r.done ? 1 : 0;
        s.running_return += r.reward;
        if (r.done) {
          s.finished.push_back({s.running_return, r.info.success, r.next.steps});
          s.running_return = 0.0;
          s.episode = start_episode(config_, s.reset_rng());
        } else {
          s.episode = r.next;
        }
      }
      const auto input = policy.normalize(s.episode.obs);
      buffer.bootstrap[e] =
          learn::policy_sample(policy, std::span<const double, kObsDim>(input), s.action_rng, true).value;
    } catch (const NumericalError& ex) {
      throw NumericalError("env " + std::to_string(e) + ": " + ex.what());
    } catch (const std::exception& ex) {
      throw std::runtime_error("env " + std::to_string(e) + ": " + ex.what());
    }
  });
}

std::vector<EpisodeRecord> VecEnv::take_finished() {
  std::vector<EpisodeRecord> out;
  for (Slot& s : slots_) {
    out.insert(out.end(), s.finished.begin(), s.finished.end());
    s.finished.clear();
  }
  return out;
}

learn::RolloutBuffer batch_rollout(const learn::ActorCritic& policy, int n_envs, int horizon,
                                   const EnvConfig& config, const RewardWeights& weights, std::uint64_t seed,
                                   int workers) {
  VecEnv env(config, weights, n_envs, seed);
  learn::RolloutBuffer buffer;
  env.collect(policy, horizon, workers, buffer);
  return buffer;
}

}  // namespace apiary
