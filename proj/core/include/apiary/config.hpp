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

#include "apiary/baseline.hpp"
#include "apiary/env.hpp"
#include "apiary/learn/ppo.hpp"
#include "apiary/mission.hpp"

namespace apiary {

struct LoggingConfig {
  bool progress = true;        // progress lines on stderr during training
  bool trainer_state = true;   // write optimizer state next to the checkpoint
  friend bool operator==(const LoggingConfig&, const LoggingConfig&) = default;
};

/// Everything a command needs. Every field has a default.
struct RunConfig {
  EnvConfig env;
  RewardWeights reward;
  learn::PpoConfig ppo;
  PdGains gains;
  PdGains hold_gains = PdGains::hold_defaults();
  SafetyThresholds safety;
  double dock_pos_tol = 0.02;
  double dock_ori_tol = 2.0 * std::numbers::pi / 180;
  LoggingConfig logging;
  std::uint64_t seed = 7;

  /// Throws ConfigError on inconsistent values.
  void validate() const;
  MissionConfig mission() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// INI-style text: [section] headers, key = value lines, '#' or ';'
/// comments. Sections: body, actuation, env, reward, ppo, baseline_gains,
/// safety, logging, seed. Unknown sections or keys, duplicates and bad
/// values throw ConfigError("<source>:<line>: ...").
RunConfig parse_run_config(std::istream& is, const std::string& source = "config");
RunConfig parse_run_config_text(const std::string& text, const std::string& source = "config");
RunConfig load_run_config(const std::string& path);

/// Every key with its resolved value; parses back to an equal RunConfig.
std::string format_run_config(const RunConfig& config);

}  // namespace apiary
