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

#include <optional>
#include <span>

#include "apiary/math3d.hpp"

namespace apiary {

/// Body-frame force/torque command.
struct Wrench {
  Vec3 force;   // N
  Vec3 torque;  // N m

  bool is_finite() const { return force.is_finite() && torque.is_finite(); }
  friend bool operator==(const Wrench&, const Wrench&) = default;
};

/// Per-axis saturation of the force allocation stand-in.
struct ActuationLimits {
  double f_max = 0.4;    // N per axis
  double tau_max = 0.1;  // N m per axis
  /// Optional slew limits, N/s and N m/s per axis. Disabled when empty.
  std::optional<double> force_rate;
  std::optional<double> torque_rate;

  void validate() const;
  friend bool operator==(const ActuationLimits&, const ActuationLimits&) = default;
};

inline constexpr int kActionDim = 6;

/// Maps a normalized action in [-1, 1]^6 to a wrench. Components outside the
/// box are clamped first; NaN maps to zero.
Wrench denormalize_action(std::span<const double, kActionDim> action, const ActuationLimits& limits);

/// Per-axis magnitude clamp only.
Wrench clamp_wrench(const Wrench& cmd, const ActuationLimits& limits);

/// Magnitude clamp followed by the optional slew clamp relative to `prev`.
Wrench apply_limits(const Wrench& prev, const Wrench& cmd, const ActuationLimits& limits, double dt);

}  // namespace apiary
