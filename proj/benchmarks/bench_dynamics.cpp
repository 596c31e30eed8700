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

#include <benchmark/benchmark.h>

#include "apiary/baseline.hpp"
#include "apiary/dynamics.hpp"
#include "apiary/env.hpp"

namespace {

using namespace apiary;

void BM_Step6Dof(benchmark::State& st) {
  BodyParams body;
  RigidState s;
  s.ang_vel = {0.1, -0.2, 0.05};
  const Wrench w{{0.1, 0.0, -0.05}, {0.0, 0.01, 0.0}};
  for (auto _ : st) {
    s = step(s, w, body, DofMask::full_6dof(), 0.016);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Step6Dof);

void BM_Step3Dof(benchmark::State& st) {
  BodyParams body;
  RigidState s;
  const Wrench w{{0.1, 0.05, 0.0}, {0.0, 0.0, 0.01}};
  for (auto _ : st) {
    s = step(s, w, body, DofMask::granite_3dof(), 0.016);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Step3Dof);

void BM_PdWrench(benchmark::State& st) {
  RigidState s;
  s.position = {0.1, -0.2, 0.3};
  const PoseGoal goal{{0.5, 0.0, 0.0}, quat_from_axis_angle({0, 0, 1}, 0.3)};
  const PdGains gains;
  const ActuationLimits limits;
  for (auto _ : st) benchmark::DoNotOptimize(pd_wrench(s, goal, gains, limits));
}
BENCHMARK(BM_PdWrench);

// One full-length episode of env stepping with a zero action.
void BM_EnvEpisode(benchmark::State& st) {
  const EnvConfig config;
  const RewardWeights weights;
  const std::array<double, kActionDim> zero{};
  for (auto _ : st) {
    Episode ep = start_episode(config, 42);
    for (int i = 0; i < config.episode_len; ++i) {
      StepResult r = env_step(ep, std::span<const double, kActionDim>(zero), config, weights);
      ep = std::move(r.next);
      if (r.done) break;
    }
    benchmark::DoNotOptimize(ep);
  }
  st.SetItemsProcessed(st.iterations() * config.episode_len);
}
BENCHMARK(BM_EnvEpisode)->Unit(benchmark::kMillisecond);

}  // namespace
