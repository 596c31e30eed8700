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
#include <functional>

namespace apiary {

/// Worker cap: explicit value if > 0, else APIARY_WORKERS, else hardware
/// concurrency (at least 1).
int resolve_workers(int requested);

/// Runs fn(i) for i in [0, n) over at most `workers` threads using
/// contiguous shards. Every index is processed exactly once; the first
/// exception thrown by any shard is rethrown after all shards join.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace apiary
