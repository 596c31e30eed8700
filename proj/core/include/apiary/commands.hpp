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
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

namespace apiary::cli {

/// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

struct TrainArgs {
  std::string config_path;  // empty: built-in defaults
  std::string out_dir;
  std::optional<std::uint64_t> seed;  // overrides [seed] seed
  int workers = 0;                    // 0: APIARY_WORKERS or hardware
};

/// Writes policy.ckpt (best), final.ckpt, curve.csv, config.ini,
/// heldout_summary.csv and, if enabled, trainer_state.bin into out_dir.
void cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err);

struct EvalArgs {
  std::string ckpt_path;
  std::string scenario = "iss6dof";  // iss6dof | granite3dof
  int episodes = 100;
  std::uint64_t seed = 0;
  std::string logs_dir;                // per-episode trajectories when set
  std::string out_dir;                 // summary.csv, episodes.csv, config.ini when set
  std::optional<double> mass_scale;    // pins the mass to this multiple of nominal
  std::string config_path;             // overrides the configuration stored in the checkpoint
  int workers = 0;
};

/// Prints a one-row summary CSV to `out`. An env-hash mismatch between the
/// checkpoint and the scenario is reported on `err`, not treated as an error.
void cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);

struct CompareArgs {
  std::string ckpt_path;
  std::string maneuver = "undock";
  std::string out_dir;
  std::string config_path;
};

/// Writes baseline.csv, rl.csv, report.csv, errors.dat and config.ini.
void cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err);

struct ReplayArgs {
  std::string sequence_path;
  std::string ckpt_path;
  std::string faults_path;
  std::string out_dir;
  std::string controller = "rl";  // rl | baseline
  std::string config_path;
};

/// Writes outcomes.csv, outcomes.txt, trajectory.csv and config.ini and
/// prints the outcomes list.
void cmd_replay(const ReplayArgs& args, std::ostream& out, std::ostream& err);

/// Runs `fn`, maps exceptions to exit codes and prints them to `err`:
/// NumericalError -> 2, everything else -> 1.
int run_guarded(const std::function<void()>& fn, std::ostream& err);

}  // namespace apiary::cli
