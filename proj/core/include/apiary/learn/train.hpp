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
#include <iosfwd>
#include <string>
#include <vector>

#include "apiary/env.hpp"
#include "apiary/learn/checkpoint.hpp"
#include "apiary/learn/policy.hpp"
#include "apiary/learn/ppo.hpp"
#include "apiary/trajectory_log.hpp"

namespace apiary::learn {

struct EpisodeOutcome {
  std::uint64_t seed = 0;
  bool success = false;
  bool out_of_bounds = false;
  double episode_return = 0.0;
  int length = 0;
  double final_pos_err = 0.0;   // m
  double final_ori_err = 0.0;   // rad
  double settle_time = 0.0;     // s until the final success hold began; NaN if unsuccessful
};

struct EvalSummary {
  int episodes = 0;
  double success_rate = 0.0;
  double mean_return = 0.0;
  double mean_final_pos_err = 0.0;
  double mean_final_ori_err = 0.0;
  double mean_settle_time = 0.0;  // over successful episodes; NaN if none
  std::vector<EpisodeOutcome> outcomes;
};

/// n episode seeds derived from a master seed.
std::vector<std::uint64_t> seed_bank(std::uint64_t seed, int n);

/// Deterministic-policy episodes, one per seed, sharded over workers. The
/// result does not depend on the worker count. When `logs` is non-null it
/// receives one trajectory per episode.
EvalSummary evaluate(const ActorCritic& policy, const EnvConfig& config, const RewardWeights& weights,
                     const std::vector<std::uint64_t>& seeds, int workers,
                     std::vector<TrajectoryLog>* logs = nullptr);

void write_eval_summary_csv(std::ostream& os, const EvalSummary& summary);

struct CurveRow {
  long long env_steps = 0;
  long long update = 0;
  double mean_return = 0.0;    // deterministic eval on the fixed seed bank
  double success_rate = 0.0;   // same
  double train_return = 0.0;   // mean return of training episodes since the last row; NaN if none ended
  LossTerms loss;
  double lr = 0.0;
};

void write_curve_header(std::ostream& os);
void write_curve_row(std::ostream& os, const CurveRow& row);

struct TrainOptions {
  int workers = 1;
  /// Best policy so far is written here whenever it improves (optional).
  std::string checkpoint_path;
  /// Optimizer state written after every evaluation (optional).
  std::string trainer_state_path;
  /// Receives the curve CSV, header first, flushed per row (optional).
  std::ostream* curve_csv = nullptr;
  /// Human-readable progress lines (optional).
  std::ostream* progress = nullptr;
  /// Resolved configuration embedded into checkpoints.
  std::string config_text;
};

struct TrainResult {
  Checkpoint best;
  ActorCritic final_policy;
  std::vector<CurveRow> curve;
  long long updates = 0;
  long long env_steps = 0;
};

/// Master seed offsets for the fixed evaluation bank used during training
/// and for a disjoint held-out bank.
inline constexpr std::uint64_t kEvalBankSalt = 0xe7a1;
inline constexpr std::uint64_t kHeldOutBankSalt = 0x401d;

/// Alternates rollout collection and PPO updates until total_env_steps.
/// Throws ConfigError("insufficient steps ...") when the budget is below one
/// batch. A numerical failure aborts the run; the best checkpoint already on
/// disk is kept and the NumericalError is rethrown.
TrainResult train(const EnvConfig& env_config, const RewardWeights& weights, const PpoConfig& ppo,
                  std::uint64_t seed, const TrainOptions& options = {});

}  // namespace apiary::learn
