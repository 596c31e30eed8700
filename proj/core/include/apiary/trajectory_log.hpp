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

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apiary/actuation.hpp"
#include "apiary/dynamics.hpp"

namespace apiary {

enum class ControlMode { kRlPolicy, kBaseline, kHoldFallback };

std::string_view to_string(ControlMode mode);
/// Accepts RL_POLICY, BASELINE, HOLD_FALLBACK. Throws ConfigError otherwise.
ControlMode parse_control_mode(std::string_view text);

/// One control tick.
struct LogRow {
  double t = 0.0;  // s
  RigidState state;
  Wrench applied;    // post-clamp, body frame
  Wrench commanded;  // pre-clamp, body frame
  Vec3 pos_err;      // goal - position, world axes
  Vec3 ori_err;      // rotation vector from current to goal, body axes
  ControlMode mode = ControlMode::kBaseline;
  int maneuver = 0;
  bool blackout = false;  // telemetry loss of signal; not part of the CSV schema
};

/// Position error (world) and orientation error (body axes) as logged.
struct PoseError {
  Vec3 position;
  Vec3 orientation;
};
PoseError logged_pose_error(const RigidState& state, const Vec3& goal_position, const Quat& goal_attitude);

/// Time-ordered record of a closed-loop run, one row per control tick.
struct TrajectoryLog {
  std::vector<LogRow> rows;
  /// Pose the maneuver started from and the pose it targeted. Set for
  /// single-maneuver logs; used to check that two logs are comparable.
  std::optional<RigidState> start;
  std::optional<Vec3> goal_position;
  std::optional<Quat> goal_attitude;
  /// Time of `start`; the first row covers (t0, rows[0].t].
  double t0 = 0.0;

  /// Appends a row. Throws std::invalid_argument unless t strictly increases.
  void append(const LogRow& row);
  bool empty() const { return rows.empty(); }
};

/// Fixed CSV column order, header included.
inline constexpr std::string_view kTrajectoryCsvHeader =
    "t,px,py,pz,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz,Fx,Fy,Fz,Tx,Ty,Tz,Fcx,Fcy,Fcz,Tcx,Tcy,Tcz,"
    "epx,epy,epz,erx,ery,erz,mode,maneuver";

void write_trajectory_csv(std::ostream& os, const TrajectoryLog& log);
void write_trajectory_csv(const std::string& path, const TrajectoryLog& log);
/// Parses a file written by write_trajectory_csv. Throws ConfigError with the
/// offending line number on malformed input.
TrajectoryLog read_trajectory_csv(std::istream& is);

}  // namespace apiary
