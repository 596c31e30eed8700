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

#include "apiary/learn/rollout.hpp"

#include <stdexcept>

namespace apiary::learn {

void RolloutBuffer::resize(int envs, int steps) {
  if (envs < 1 || steps < 1) throw std::invalid_argument("rollout buffer needs positive dimensions");
  n_envs = envs;
  horizon = steps;
  const std::size_t n = size();
  obs.assign(n * kObsDim, 0.0);
  actions.assign(n * kActionDim, 0.0);
  log_probs.assign(n, 0.0);
  rewards.assign(n, 0.0);
  values.assign(n, 0.0);
  dones.assign(n, 0);
  bootstrap.assign(std::size_t(envs), 0.0);
  advantages.assign(n, 0.0);
  returns.assign(n, 0.0);
}

}  // namespace apiary::learn
