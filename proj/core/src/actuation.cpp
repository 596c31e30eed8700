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

#include "apiary/actuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace apiary {

namespace {

double clamp_axis(double v, double limit) {
  if (std::isnan(v)) return 0.0;
  return std::clamp(v, -limit, limit);
}

Vec3 clamp_vec(const Vec3& v, double limit) {
  return {clamp_axis(v.x, limit), clamp_axis(v.y, limit), clamp_axis(v.z, limit)};
}

Vec3 slew(const Vec3& prev, const Vec3& cmd, double max_step) {
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    out[i] = prev[i] + std::clamp(cmd[i] - prev[i], -max_step, max_step);
  }
  return out;
}

}  // namespace

void ActuationLimits::validate() const {
  if (!(f_max > 0.0) || !(tau_max > 0.0)) {
    throw std::invalid_argument("actuation limits must be positive");
  }
  if ((force_rate && !(*force_rate > 0.0)) || (torque_rate && !(*torque_rate > 0.0))) {
    throw std::invalid_argument("actuation rate limits must be positive");
  }
}

Wrench denormalize_action(std::span<const double, kActionDim> action, const ActuationLimits& limits) {
  Wrench w;
  for (int i = 0; i < 3; ++i) {
    w.force[i] = clamp_axis(action[i], 1.0) * limits.f_max;
    w.torque[i] = clamp_axis(action[i + 3], 1.0) * limits.tau_max;
  }
  return w;
}

Wrench clamp_wrench(const Wrench& cmd, const ActuationLimits& limits) {
  return {clamp_vec(cmd.force, limits.f_max), clamp_vec(cmd.torque, limits.tau_max)};
}

Wrench apply_limits(const Wrench& prev, const Wrench& cmd, const ActuationLimits& limits, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("apply_limits: dt must be positive");
  Wrench out = clamp_wrench(cmd, limits);
  // prev is clamped too so a stale out-of-range value cannot leak through the slew step.
  const Wrench base = clamp_wrench(prev, limits);
  if (limits.force_rate) out.force = slew(base.force, out.force, *limits.force_rate * dt);
  if (limits.torque_rate) out.torque = slew(base.torque, out.torque, *limits.torque_rate * dt);
  return out;
}

}  // namespace apiary
