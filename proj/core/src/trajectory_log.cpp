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

#include "apiary/trajectory_log.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "apiary/error.hpp"

namespace apiary {

std::string_view to_string(ControlMode mode) {
  switch (mode) {
    case ControlMode::kRlPolicy:
      return "RL_POLICY";
    case ControlMode::kBaseline:
      return "BASELINE";
    case ControlMode::kHoldFallback:
      return "HOLD_FALLBACK";
  }
  return "UNKNOWN";
}

ControlMode parse_control_mode(std::string_view text) {
  if (text == "RL_POLICY") return ControlMode::kRlPolicy;
  if (text == "BASELINE") return ControlMode::kBaseline;
  if (text == "HOLD_FALLBACK") return ControlMode::kHoldFallback;
  throw ConfigError("unknown control mode '" + std::string(text) + "'");
}

PoseError logged_pose_error(const RigidState& state, const Vec3& goal_position, const Quat& goal_attitude) {
  return {goal_position - state.position,
          rotate_inverse(state.attitude, quat_error(goal_attitude, state.attitude))};
}

void TrajectoryLog::append(const LogRow& row) {
  if (!rows.empty() && !(row.t > rows.back().t)) {
    throw std::invalid_argument("trajectory log times must strictly increase");
  }
  rows.push_back(row);
}

namespace {

void put(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  os << buf << ',';
}

void put(std::ostream& os, const Vec3& v) {
  put(os, v.x);
  put(os, v.y);
  put(os, v.z);
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const TrajectoryLog& log) {
  os << kTrajectoryCsvHeader << '\n';
  for (const LogRow& r : log.rows) {
    put(os, r.t);
    put(os, r.state.position);
    put(os, r.state.attitude.w());
    put(os, r.state.attitude.x());
    put(os, r.state.attitude.y());
    put(os, r.state.attitude.z());
    put(os, r.state.lin_vel);
    put(os, r.state.ang_vel);
    put(os, r.applied.force);
    put(os, r.applied.torque);
    put(os, r.commanded.force);
    put(os, r.commanded.torque);
    put(os, r.pos_err);
    put(os, r.ori_err);
    os << to_string(r.mode) << ',' << r.maneuver << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const TrajectoryLog& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_trajectory_csv(out, log);
}

TrajectoryLog read_trajectory_csv(std::istream& is) {
  TrajectoryLog log;
  std::string line;
  int line_no = 0;
  if (!std::getline(is, line) || line != kTrajectoryCsvHeader) {
    throw ConfigError("trajectory csv line 1: unexpected header");
  }
  ++line_no;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 34) {
      throw ConfigError("trajectory csv line " + std::to_string(line_no) + ": expected 34 columns");
    }
    try {
      std::vector<double> v(32);
      for (int i = 0; i < 32; ++i) v[i] = std::stod(cells[i]);
      LogRow r;
      r.t = v[0];
      r.state.position = {v[1], v[2], v[3]};
      r.state.attitude = Quat::from_unit(v[4], v[5], v[6], v[7]);
      r.state.lin_vel = {v[8], v[9], v[10]};
      r.state.ang_vel = {v[11], v[12], v[13]};
      r.applied = {{v[14], v[15], v[16]}, {v[17], v[18], v[19]}};
      r.commanded = {{v[20], v[21], v[22]}, {v[23], v[24], v[25]}};
      r.pos_err = {v[26], v[27], v[28]};
      r.ori_err = {v[29], v[30], v[31]};
      r.mode = parse_control_mode(cells[32]);
      r.maneuver = std::stoi(cells[33]);
      log.append(r);
    } catch (const ConfigError& e) {
      throw ConfigError("trajectory csv line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::exception& e) {
      throw ConfigError("trajectory csv line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return log;
}

}  // namespace apiary
