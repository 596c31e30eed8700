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

#include <array>

#include "apiary/actuation.hpp"
#include "apiary/math3d.hpp"

namespace apiary {

/// Pose and twist of the free-flyer.
struct RigidState {
  Vec3 position;          // m, world
  Quat attitude;          // body -> world
  Vec3 lin_vel;           // m/s, world
  Vec3 ang_vel;           // rad/s, body

  bool is_finite() const {
    return position.is_finite() && attitude.is_finite() && lin_vel.is_finite() && ang_vel.is_finite();
  }
  friend bool operator==(const RigidState&, const RigidState&) = default;
};

/// Mass properties. Inertia is diagonal in the body frame.
struct BodyParams {
  double mass = 9.5;                      // kg
  Vec3 inertia_diag{0.15, 0.14, 0.16};    // kg m^2
  Vec3 com_offset;                        // m, body frame

  /// Throws std::invalid_argument if mass/inertia are non-positive or the
  /// principal moments violate the triangle inequalities.
  void validate() const;

  friend bool operator==(const BodyParams&, const BodyParams&) = default;
};

/// Which degrees of freedom may move. Translation flags are world axes;
/// rotation flags are body axes.
struct DofMask {
  std::array<bool, 3> free_translation{true, true, true};
  std::array<bool, 3> free_rotation{true, true, true};

  static constexpr DofMask full_6dof() { return {}; }
  /// Air-bearing table: x/y translation and yaw only.
  static constexpr DofMask granite_3dof() { return {{true, true, false}, {false, false, true}}; }

  bool is_full() const;
  friend bool operator==(const DofMask&, const DofMask&) = default;
};

/// One semi-implicit Euler step of zero-G rigid-body motion.
///
/// Velocities are updated first, then the pose. Rotation is advanced in
/// momentum form: the world-frame angular momentum absorbs the applied
/// torque impulse, and the body rate is recovered from it after the
/// attitude update. This is Euler's equation (gyroscopic term included)
/// written in the inertial frame, and keeps angular momentum constant to
/// roundoff when no torque acts. Masked DOFs have their velocity forced to
/// zero. Throws NumericalError if the result is non-finite.
RigidState step(const RigidState& state, const Wrench& wrench, const BodyParams& params,
                const DofMask& mask, double dt);

/// 1/2 m v^2 + 1/2 w^T I w.
double kinetic_energy(const RigidState& state, const BodyParams& params);

struct Momentum {
  Vec3 linear;   // m v, world
  Vec3 angular;  // R I w, world, about the center of mass
};
Momentum momentum(const RigidState& state, const BodyParams& params);

}  // namespace apiary
