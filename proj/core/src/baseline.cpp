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

#include "apiary/baseline.hpp"

#include <stdexcept>

namespace apiary {

void PdGains::validate() const {
  if (!(kp_pos >= 0) || !(kd_pos >= 0) || !(kp_att >= 0) || !(kd_att >= 0)) {
    throw std::invalid_argument("PD gains must be non-negative");
  }
  if ((kp_pos > 0 && kd_pos == 0) || (kp_att > 0 && kd_att == 0)) {
    throw std::invalid_argument("PD gains: kd must be positive when kp is");
  }
}

Wrench pd_wrench_raw(const RigidState& state, const PoseGoal& goal, const PdGains& g) {
  const Vec3 f_world = g.kp_pos * (goal.position - state.position) - g.kd_pos * state.lin_vel;
  const Vec3 ori_err_body = rotate_inverse(state.attitude, quat_error(goal.attitude, state.attitude));
  Wrench w;
  w.force = rotate_inverse(state.attitude, f_world);
  w.torque = g.kp_att * ori_err_body - g.kd_att * state.ang_vel;
  return w;
}

Wrench pd_wrench(const RigidState& state, const PoseGoal& goal, const PdGains& gains, const ActuationLimits& limits,
                 const Wrench& prev, double dt) {
  return apply_limits(prev, pd_wrench_raw(state, goal, gains), limits, dt);
}

Controller hold_pose_controller(const RigidState& captured, const PdGains& gains) {
  gains.validate();
  const PoseGoal goal{captured.position, captured.attitude};
  return [goal, gains](const RigidState& s) { return pd_wrench_raw(s, goal, gains); };
}

}  // namespace apiary
