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

#include "apiary/dynamics.hpp"

#include <stdexcept>

#include "apiary/error.hpp"

namespace apiary {

void BodyParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw std::invalid_argument("body mass must be positive");
  }
  const Vec3& i = inertia_diag;
  if (!(i.x > 0.0 && i.y > 0.0 && i.z > 0.0) || !i.is_finite()) {
    throw std::invalid_argument("principal moments of inertia must be positive");
  }
  if (i.x + i.y < i.z || i.y + i.z < i.x || i.x + i.z < i.y) {
    throw std::invalid_argument("principal moments violate the triangle inequality");
  }
  if (!com_offset.is_finite()) {
    throw std::invalid_argument("center-of-mass offset must be finite");
  }
}

bool DofMask::is_full() const {
  for (int i = 0; i < 3; ++i) {
    if (!free_translation[i] || !free_rotation[i]) return false;
  }
  return true;
}

RigidState step(const RigidState& state, const Wrench& wrench, const BodyParams& params,
                const DofMask& mask, double dt) {
  if (!(dt > 0.0 && dt <= 0.5)) throw std::invalid_argument("step: dt must be in (0, 0.5]");
  if (!wrench.is_finite()) throw std::invalid_argument("step: non-finite wrench");

  const Vec3& inertia = params.inertia_diag;
  const Vec3 torque_body = wrench.torque + cross(params.com_offset, wrench.force);

  RigidState next = state;

  Vec3 accel = rotate(state.attitude, wrench.force) / params.mass;
  for (int i = 0; i < 3; ++i) {
    if (!mask.free_translation[i]) {
      accel[i] = 0.0;
      next.lin_vel[i] = 0.0;
    }
  }
  next.lin_vel += accel * dt;
  next.position += next.lin_vel * dt;

  if (mask.is_full()) {
    const Vec3 h_world =
        rotate(state.attitude, hadamard(inertia, state.ang_vel) + torque_body * dt);
    // Rate at the start of the interval, from the updated momentum.
    const Vec3 h_body = rotate_inverse(state.attitude, h_world);
    const Vec3 omega_mid{h_body.x / inertia.x, h_body.y / inertia.y, h_body.z / inertia.z};
    next.attitude = quat_integrate(state.attitude, omega_mid, dt);
    const Vec3 h_new = rotate_inverse(next.attitude, h_world);
    next.ang_vel = {h_new.x / inertia.x, h_new.y / inertia.y, h_new.z / inertia.z};
  } else {
    // Constrained rotation: only spins about free body axes survive. For the
    // planar case this is a single axis, where the gyroscopic term vanishes.
    Vec3 omega = state.ang_vel;
    for (int i = 0; i < 3; ++i) {
      if (!mask.free_rotation[i]) omega[i] = 0.0;
    }
    const Vec3 gyro = cross(omega, hadamard(inertia, omega));
    Vec3 alpha{(torque_body.x - gyro.x) / inertia.x, (torque_body.y - gyro.y) / inertia.y,
               (torque_body.z - gyro.z) / inertia.z};
    for (int i = 0; i < 3; ++i) {
      if (!mask.free_rotation[i]) alpha[i] = 0.0;
    }
    next.ang_vel = omega + alpha * dt;
    next.attitude = quat_integrate(state.attitude, next.ang_vel, dt);
  }

  if (!next.is_finite()) throw NumericalError("dynamics step produced a non-finite state");
  return next;
}

double kinetic_energy(const RigidState& state, const BodyParams& params) {
  return 0.5 * params.mass * state.lin_vel.squared_norm() +
         0.5 * dot(state.ang_vel, hadamard(params.inertia_diag, state.ang_vel));
}

Momentum momentum(const RigidState& state, const BodyParams& params) {
  return {state.lin_vel * params.mass,
          rotate(state.attitude, hadamard(params.inertia_diag, state.ang_vel))};
}

}  // namespace apiary
