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

#include <functional>

#include "apiary/actuation.hpp"
#include "apiary/dynamics.hpp"
#include "apiary/math3d.hpp"

namespace apiary {

/// PD gains. Defaults are critically damped for the nominal 9.5 kg body and
/// its ~0.15 kg m^2 principal moments.
struct PdGains {
  double kp_pos = 0.6;   // N/m
  double kd_pos = 4.8;   // N s/m
  double kp_att = 0.2;   // N m/rad
  double kd_att = 0.35;  // N m s/rad

  /// Stiffer set used by the hold-pose fallback so a drifting body is
  /// arrested within a few seconds.
  static constexpr PdGains hold_defaults() { return {2.4, 9.5, 0.6, 0.6}; }

  /// Throws std::invalid_argument on negative gains or kp > 0 with kd == 0.
  void validate() const;
  friend bool operator==(const PdGains&, const PdGains&) = default;
};

/// Target pose with zero twist.
struct PoseGoal {
  Vec3 position;
  Quat attitude;
  friend bool operator==(const PoseGoal&, const PoseGoal&) = default;
};

/// Unclamped PD wrench in the body frame.
///   force  = R^T (kp_pos * (p_goal - p) - kd_pos * v)
///   torque = kp_att * R^T err(q_goal, q) - kd_att * w
Wrench pd_wrench_raw(const RigidState& state, const PoseGoal& goal, const PdGains& gains);

/// pd_wrench_raw followed by apply_limits against the previous command.
Wrench pd_wrench(const RigidState& state, const PoseGoal& goal, const PdGains& gains, const ActuationLimits& limits,
                 const Wrench& prev = {}, double dt = 0.016);

/// Maps a state to an unclamped body wrench.
using Controller = std::function<Wrench(const RigidState&)>;

/// Regulates to the pose of `captured` with zero twist.
Controller hold_pose_controller(const RigidState& captured, const PdGains& gains = PdGains::hold_defaults());

}  // namespace apiary
