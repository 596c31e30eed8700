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
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apiary/baseline.hpp"
#include "apiary/dynamics.hpp"
#include "apiary/env.hpp"
#include "apiary/trajectory_log.hpp"

namespace apiary {

namespace learn {
struct ActorCritic;
}

enum class ManeuverKind { kTranslate, kRotate, kGotoPose, kDockApproach, kDock };

std::string_view to_string(ManeuverKind kind);

/// One commanded motion. Translate and rotate are relative to the entry
/// pose (world axes); goto_pose is absolute; dock targets the dock pose and
/// dock_approach the dock pose offset by `magnitude` along `axis`.
struct Maneuver {
  ManeuverKind kind = ManeuverKind::kTranslate;
  Vec3 axis{1.0, 0.0, 0.0};  // unit vector
  double magnitude = 0.0;    // m (translate, dock_approach) or rad (rotate, goto_pose yaw)
  Vec3 position;             // goto_pose only, world
  double timeout = 30.0;     // s
  bool resume = false;       // operator re-engages after a fallback on the previous item
  bool loss_of_signal = false;
  std::string label;         // optional display name

  /// Throws ConfigError unless timeout > 0, axis is unit length and values are finite.
  void validate() const;
};

/// Display name: the label if set, else generated from the kind and target.
std::string describe(const Maneuver& m);

/// Target pose for a maneuver entered at `entry`.
PoseGoal maneuver_goal(const Maneuver& m, const RigidState& entry, const PoseGoal& dock);

struct SafetyThresholds {
  double max_pos_err = 0.25;                        // m, from the commanded path
  double max_ori_err = 30.0 * std::numbers::pi / 180;  // rad
  double max_lin_vel = 0.5;                         // m/s
  double max_ang_vel = 1.0;                         // rad/s
  int trip_consecutive = 3;                         // ticks

  void validate() const;
  friend bool operator==(const SafetyThresholds&, const SafetyThresholds&) = default;
};

struct SafetyDecision {
  bool fallback = false;  // counter reached trip_consecutive on this tick
  bool exceeded = false;  // some threshold was exceeded on this tick
  int trip_counter = 0;
};

/// Counts consecutive ticks with any threshold exceeded; a clean tick resets
/// the counter. `reference` is the pose the errors are measured from.
SafetyDecision safety_check(const RigidState& state, const PoseGoal& reference, const SafetyThresholds& thresholds,
                            int trip_counter);

/// Closest point to `p` on the segment a-b.
Vec3 closest_on_segment(const Vec3& a, const Vec3& b, const Vec3& p);

/// Perceived-pose fault: from `tick` of maneuver `maneuver` (1-based) to the
/// end of that maneuver, the controller and monitor see the pose shifted by
/// `offset` and rotated by `rotation` (world rotation vector).
struct LocalizationFault {
  int maneuver = 1;
  int tick = 0;
  Vec3 offset;    // m
  Vec3 rotation;  // rad
};

RigidState perceive(const RigidState& truth, const LocalizationFault& fault);

struct MissionConfig {
  /// dt, nominal body, DOF mask, actuation limits, success tolerances and hold_steps.
  EnvConfig env;
  double dock_pos_tol = 0.02;                        // m
  double dock_ori_tol = 2.0 * std::numbers::pi / 180;  // rad
  SafetyThresholds safety;
  PdGains gains;
  PdGains hold_gains = PdGains::hold_defaults();

  void validate() const;
};

enum class ManeuverOutcome { kSuccess, kFallbackTriggered, kTimeout, kSkipped };
std::string_view to_string(ManeuverOutcome outcome);

struct ManeuverResult {
  RigidState final_state;
  PoseGoal goal;
  TrajectoryLog log;
  ManeuverOutcome outcome = ManeuverOutcome::kTimeout;
  std::optional<int> trip_tick;  // tick at which HOLD_FALLBACK engaged
  double final_pos_err = 0.0;
  double final_ori_err = 0.0;
};

struct ManeuverContext {
  PoseGoal dock{};     // docked pose
  double t0 = 0.0;     // s, time of the entry state
  int index = 1;       // 1-based position in the sequence, logged per row
  std::optional<LocalizationFault> fault;
};

/// Runs the full timeout window at 1/dt Hz:
///   perceive -> safety check (RL only) -> wrench -> limits -> step -> log.
/// A safety trip switches to hold-pose on the same tick and stays there.
/// Outcome: fallback_triggered if the monitor tripped, success if the
/// success condition held over the final hold_steps ticks, else timeout.
/// Throws ConfigError when RL_POLICY is requested without a policy and
/// NumericalError on a non-finite state.
ManeuverResult run_maneuver(const RigidState& entry, const Maneuver& maneuver, ControlMode controller,
                            const learn::ActorCritic* policy, const MissionConfig& config,
                            const ManeuverContext& context = {});

struct ManeuverRecord {
  int index = 0;  // 1-based
  Maneuver maneuver;
  ManeuverOutcome outcome = ManeuverOutcome::kSkipped;
  double start_time = 0.0;
  double duration = 0.0;
  double final_pos_err = 0.0;
  double final_ori_err = 0.0;
  std::optional<double> fallback_time;  // s, absolute
};

struct SequenceResult {
  std::vector<ManeuverRecord> records;
  TrajectoryLog log;  // all executed maneuvers back to back
  RigidState final_state;
  int successes() const;
};

/// Executes maneuvers in order from `start` (the dock pose by default).
/// After a fallback the next item runs only if it carries the resume flag;
/// otherwise it and every later item are reported as skipped.
SequenceResult run_sequence(const std::vector<Maneuver>& sequence, ControlMode controller,
                            const learn::ActorCritic* policy, const MissionConfig& config,
                            const std::vector<LocalizationFault>& faults = {}, const RigidState& start = {});

/// Sequence file: one maneuver per line, '#' comments,
///   kind axis magnitude timeout [resume] [los] ["label"]
/// kind: translate | rotate | goto_pose | dock_approach | dock
/// axis: x, y, z with optional sign; for goto_pose a "px,py,pz" position.
/// magnitude: m for translate/dock_approach, degrees for rotate and for the
/// goto_pose yaw; ignored for dock.
/// Throws ConfigError("<source>:<line>: ...") on malformed lines.
std::vector<Maneuver> parse_sequence(std::istream& is, const std::string& source = "sequence");
std::vector<Maneuver> load_sequence(const std::string& path);

/// One maneuver in sequence-line syntax; commas may replace spaces.
/// "undock" is shorthand for translate +x 0.5 m in 30 s.
Maneuver parse_maneuver_spec(const std::string& spec);

/// Fault file: one fault per line, '#' comments,
///   maneuver tick dx dy dz [rx ry rz]
/// with offsets in m and rotation vector components in degrees.
std::vector<LocalizationFault> parse_faults(std::istream& is, const std::string& source = "faults");
std::vector<LocalizationFault> load_faults(const std::string& path);

/// index,maneuver,outcome,start_time,duration,final_pos_err,final_ori_err,fallback_time,loss_of_signal
void write_outcomes_csv(std::ostream& os, const SequenceResult& result);
/// Numbered list, one line per maneuver: "6. Docking attempt - fallback_triggered".
void write_outcomes_list(std::ostream& os, const SequenceResult& result);

struct MetricTolerances {
  double pos = 0.05;                             // m
  double ori = 5.0 * std::numbers::pi / 180;     // rad
};

struct MetricSet {
  Vec3 final_pos_err;      // m, world axes, signed
  Vec3 final_ori_err;      // rad, body axes, signed
  double final_pos_norm = 0.0;
  double final_ori_norm = 0.0;
  double settle_time = 0.0;        // s from t0 until both errors stay within tolerance; NaN if never
  double max_cross_axis = 0.0;     // m, largest distance from the start-goal line
  double path_length = 0.0;        // m
  double force_effort = 0.0;       // integral of |F| dt, N s
  double torque_effort = 0.0;      // integral of |tau| dt, N m s
};

/// Needs a non-empty log with start and goal set.
MetricSet compute_metrics(const TrajectoryLog& log, const MetricTolerances& tol = {});

struct MetricReport {
  MetricSet rl;
  MetricSet baseline;
  MetricSet difference;  // rl - baseline; a settle time missing on both sides gives 0
  bool baseline_less_final_error = false;
  bool rl_more_cross_axis = false;
};

/// Throws std::invalid_argument when the logs do not share start and goal.
MetricReport compare_metrics(const TrajectoryLog& log_rl, const TrajectoryLog& log_baseline,
                             const MetricTolerances& tol = {});

/// metric,rl,baseline,difference
void write_metric_report_csv(std::ostream& os, const MetricReport& report);

/// Whitespace-separated error-vs-time table for both runs, '#' header.
void write_error_table(std::ostream& os, const TrajectoryLog& log_rl, const TrajectoryLog& log_baseline);

}  // namespace apiary
