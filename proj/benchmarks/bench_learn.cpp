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

#include <random>
#include <vector>

#include "apiary/learn/mlp.hpp"
#include "apiary/learn/policy.hpp"

namespace {

using namespace apiary;
using namespace apiary::learn;

MlpParams net(int width) {
  std::mt19937_64 rng(1);
  return make_mlp({12, width, width, 6}, rng);
}

void BM_MlpForward(benchmark::State& st) {
  const MlpParams p = net(static_cast<int>(st.range(0)));
  MlpWorkspace ws;
  ws.prepare(p);
  std::vector<double> x(12, 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(mlp_forward(p, x, ws).data());
}
BENCHMARK(BM_MlpForward)->Arg(16)->Arg(64)->Arg(256);

void BM_MlpForwardBackward(benchmark::State& st) {
  const MlpParams p = net(static_cast<int>(st.range(0)));
  MlpWorkspace ws;
  ws.prepare(p);
  std::vector<double> x(12, 0.3), g(6, 1.0), grad(p.data.size());
  for (auto _ : st) {
    mlp_forward(p, x, ws);
    mlp_backward(p, ws, g, grad);
    benchmark::DoNotOptimize(grad.data());
  }
}
BENCHMARK(BM_MlpForwardBackward)->Arg(16)->Arg(64)->Arg(256);

void BM_PolicySample(benchmark::State& st) {
  const ActorCritic policy = ActorCritic::create({64, 64}, 0.0, 3);
  std::mt19937_64 rng(5);
  std::array<double, kObsDim> x{};
  x.fill(0.2);
  for (auto _ : st) benchmark::DoNotOptimize(policy_sample(policy, std::span<const double, kObsDim>(x), rng));
}
BENCHMARK(BM_PolicySample);

}  // namespace
