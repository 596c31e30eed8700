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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "apiary/learn/policy.hpp"
#include "apiary/learn/ppo.hpp"

namespace apiary::learn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Everything stored next to the network weights.
struct CheckpointMeta {
  std::uint64_t env_hash = 0;
  /// Named scalar hyperparameters (action limits, dt, PPO settings, eval
  /// results), kept in insertion order.
  std::vector<std::pair<std::string, double>> scalars;
  /// Resolved run configuration the policy was trained under (INI text).
  std::string config_text;

  /// Value of a named scalar; throws std::out_of_range if absent.
  double scalar(const std::string& name) const;
  void set_scalar(const std::string& name, double value);

  friend bool operator==(const CheckpointMeta&, const CheckpointMeta&) = default;
};

struct Checkpoint {
  ActorCritic policy;
  CheckpointMeta meta;
  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

/// Little-endian binary policy file:
///   "APRY", u32 version, u32 activation (0 = tanh), u32 obs frame,
///   u32 n + n x u32 actor sizes, u32 m + m x u32 critic sizes,
///   4 x f64 observation scales, u64 env hash,
///   u32 k + k x (u16 len, name, f64) scalars, u32 len + config text,
///   f64 arrays (actor, log-std, critic), u64 FNV-1a of everything before.
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
std::vector<unsigned char> encode_checkpoint(const Checkpoint& ckpt);

/// Throws ConfigError on missing files, bad magic/version, shape mismatch,
/// truncation, or checksum failure.
Checkpoint load_checkpoint(const std::string& path);
Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes);

/// Optimizer state for resuming training ("APRT" file: version, Adam step,
/// moments, update count, env steps). Not needed to run a policy.
struct TrainerState {
  long long adam_steps = 0;
  ParamGrad first_moment;
  ParamGrad second_moment;
  long long updates = 0;
  long long env_steps = 0;
};
void save_trainer_state(const std::string& path, const TrainerState& state);
TrainerState load_trainer_state(const std::string& path);

}  // namespace apiary::learn
