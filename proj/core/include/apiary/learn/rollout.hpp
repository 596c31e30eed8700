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
#include <vector>

#include "apiary/actuation.hpp"
#include "apiary/env.hpp"

namespace apiary::learn {

/// On-policy samples laid out [env][time]. Observations are stored as the
/// normalized network inputs.
struct RolloutBuffer {
  int n_envs = 0;
  int horizon = 0;
  std::vector<double> obs;        // [env][t][12]
  std::vector<double> actions;    // [env][t][6], unclipped samples
  std::vector<double> log_probs;  // [env][t]
  std::vector<double> rewards;
  std::vector<double> values;
  std::vector<std::uint8_t> dones;
  std::vector<double> bootstrap;   // [env], value of the state after the last step
  std::vector<double> advantages;  // filled by compute_advantages
  std::vector<double> returns;

  void resize(int envs, int steps);
  std::size_t size() const { return std::size_t(n_envs) * horizon; }
  std::size_t index(int env, int t) const { return std::size_t(env) * horizon + t; }

  friend bool operator==(const RolloutBuffer&, const RolloutBuffer&) = default;
};

}  // namespace apiary::learn
