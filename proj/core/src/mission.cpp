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

#include "apiary/mission.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "apiary/error.hpp"
#include "apiary/learn/policy.hpp"

namespace apiary {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string axis_name(const Vec3& axis) {
  if (std::abs(axis.x) == 1.0) return "X";
  if (std::abs(axis.y) == 1.0) return "Y";
  if (std::abs(axis.z) == 1.0) return "Z";
  return "(" + fmt("%g", axis.x) + ", " + fmt("%g", axis.y) + ", " + fmt("%g", axis.z) + ")";
}

// Signed magnitude along the named basis axis.
double signed_along(const Vec3& axis, double magnitude) {
  const double s = axis.x + axis.y + axis.z;
  return (std::abs(s) == 1.0 ? s : 1.0) * magnitude;
}

bool within(const RigidState& s, const PoseGoal& g, double pos_tol, double ori_tol, const EnvConfig& env) {
  return (g.position - s.position).norm() < pos_tol && quat_angle_between(g.attitude, s.attitude) < ori_tol &&
         s.lin_vel.norm() < env.success_vel_tol && s.ang_vel.norm() < env.success_angvel_tol;
}

[[noreturn]] void parse_error(const std::string& source, int line, const std::string& msg) {
  throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& tok, const std::string& what, const std::string& source, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    parse_error(source, line, "invalid " + what + " '" + tok + "'");
  }
}

Vec3 parse_axis(const std::string& tok, const std::string& source, int line) {
  std::string t = tok;
  double sign = 1.0;
  if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
    sign = t[0] == '-' ? -1.0 : 1.0;
    t.erase(0, 1);
  }
  if (t == "x" || t == "X") return {sign, 0, 0};
  if (t == "y" || t == "Y") return {0, sign, 0};
  if (t == "z" || t == "Z") return {0, 0, sign};
  parse_error(source, line, "invalid axis '" + tok + "' (expected x, y or z)");
}

Vec3 parse_triplet(const std::string& tok, const std::string& what, const std::string& source, int line) {
  std::vector<std::string> parts;
  std::stringstream ss(tok);
  for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
  if (parts.size() != 3) parse_error(source, line, "expected " + what + " as x,y,z but got '" + tok + "'");
  return {parse_number(parts[0], what, source, line), parse_number(parts[1], what, source, line),
          parse_number(parts[2], what, source, line)};
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  is >> std::ws;
  while (is && !is.eof()) {
    std::string tok;
    if (is.peek() == '"') {
      is >> std::quoted(tok);
      out.push_back("\"" + tok);  // marks a label
    } else {
      is >> tok;
      out.push_back(tok);
    }
    is >> std::ws;
  }
  return out;
}

Maneuver parse_line(const std::vector<std::string>& tok, const std::string& source, int line) {
  if (tok.size() < 4) parse_error(source, line, "expected 'kind axis magnitude timeout [resume] [los] [\"label\"]'");
  Maneuver m;
  const std::string& kind = tok[0];
  if (kind == "translate") {
    m.kind = ManeuverKind::kTranslate;
  } else if (kind == "rotate") {
    m.kind = ManeuverKind::kRotate;
  } else if (kind == "goto_pose") {
    m.kind = ManeuverKind::kGotoPose;
  } else if (kind == "dock_approach") {
    m.kind = ManeuverKind::kDockApproach;
  } else if (kind == "dock") {
    m.kind = ManeuverKind::kDock;
  } else {
    parse_error(source, line, "unknown maneuver kind '" + kind + "'");
  }
  if (m.kind == ManeuverKind::kGotoPose) {
    m.position = parse_triplet(tok[1], "position", source, line);
    m.axis = {0, 0, 1};
  } else {
    m.axis = parse_axis(tok[1], source, line);
  }
  m.magnitude = parse_number(tok[2], "magnitude", source, line);
  if (m.kind == ManeuverKind::kRotate || m.kind == ManeuverKind::kGotoPose) m.magnitude *= kDeg;
  m.timeout = parse_number(tok[3], "timeout", source, line);
  if (!(m.timeout > 0)) parse_error(source, line, "timeout must be positive");
  for (std::size_t i = 4; i < tok.size(); ++i) {
    if (tok[i] == "resume") {
      m.resume = true;
    } else if (tok[i] == "los") {
      m.loss_of_signal = true;
    } else if (!tok[i].empty() && tok[i][0] == '"') {
      m.label = tok[i].substr(1);
    } else {
      parse_error(source, line, "unknown flag '" + tok[i] + "'");
    }
  }
  return m;
}

template <typename F>
void for_each_line(std::istream& is, F&& fn) {
  std::string text;
  int line = 0;
  while (std::getline(is, text)) {
    ++line;
    // A '#' starts a comment unless it sits inside a quoted label.
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '"') quoted = !quoted;
      if (text[i] == '#' && !quoted) {
        text.erase(i);
        break;
      }
    }
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    fn(text, line);
  }
}

}  // namespace

std::string_view to_string(ManeuverKind kind) {
  switch (kind) {
    case ManeuverKind::kTranslate:
      return "translate";
    case ManeuverKind::kRotate:
      return "rotate";
    case ManeuverKind::kGotoPose:
      return "goto_pose";
    case ManeuverKind::kDockApproach:
      return "dock_approach";
    case ManeuverKind::kDock:
      return "dock";
  }
  return "unknown";
}

std::string_view to_string(ManeuverOutcome outcome) {
  switch (outcome) {
    case ManeuverOutcome::kSuccess:
      return "success";
    case ManeuverOutcome::kFallbackTriggered:
      return "fallback_triggered";
    case ManeuverOutcome::kTimeout:
      return "timeout";
    case ManeuverOutcome::kSkipped:
      return "skipped";
  }
  return "unknown";
}

void Maneuver::validate() const {
  if (!(timeout > 0) || !std::isfinite(timeout)) throw ConfigError("maneuver timeout must be positive");
  if (!axis.is_finite() || std::abs(axis.norm() - 1.0) > 1e-9) throw ConfigError("maneuver axis must be a unit vector");
  if (!std::isfinite(magnitude) || !position.is_finite()) throw ConfigError("maneuver target must be finite");
}

std::string describe(const Maneuver& m) {
  if (!m.label.empty()) return m.label;
  switch (m.kind) {
    case ManeuverKind::kTranslate:
      return "Translation (" + fmt("%+g", signed_along(m.axis, m.magnitude)) + " m " + axis_name(m.axis) + "-axis)";
    case ManeuverKind::kRotate:
      return "Rotation (" + fmt("%+g", signed_along(m.axis, m.magnitude) / kDeg) + " deg " + axis_name(m.axis) +
             "-axis)";
    case ManeuverKind::kGotoPose:
      return "Go to pose (" + fmt("%g", m.position.x) + ", " + fmt("%g", m.position.y) + ", " +
             fmt("%g", m.position.z) + " m, yaw " + fmt("%g", m.magnitude / kDeg) + " deg)";
    case ManeuverKind::kDockApproach:
      return "Pre-docking motion to dock offset";
    case ManeuverKind::kDock:
      return "Docking attempt";
  }
  return "Maneuver";
}

PoseGoal maneuver_goal(const Maneuver& m, const RigidState& entry, const PoseGoal& dock) {
  switch (m.kind) {
    case ManeuverKind::kTranslate:
      return {entry.position + m.magnitude * m.axis, entry.attitude};
    case ManeuverKind::kRotate:
      return {entry.position, quat_mul(quat_from_axis_angle(m.axis, m.magnitude), entry.attitude).canonical()};
    case ManeuverKind::kGotoPose:
      return {m.position, quat_from_axis_angle({0, 0, 1}, m.magnitude).canonical()};
    case ManeuverKind::kDockApproach:
      return {dock.position + m.magnitude * m.axis, dock.attitude};
    case ManeuverKind::kDock:
      return dock;
  }
  return dock;
}

void SafetyThresholds::validate() const {
  if (!(max_pos_err > 0) || !(max_ori_err > 0) || !(max_lin_vel > 0) || !(max_ang_vel > 0) || trip_consecutive < 1) {
    throw ConfigError("safety thresholds must be positive");
  }
}

SafetyDecision safety_check(const RigidState& state, const PoseGoal& reference, const SafetyThresholds& th,
                            int trip_counter) {
  SafetyDecision d;
  d.exceeded = (reference.position - state.position).norm() > th.max_pos_err ||
               quat_angle_between(reference.attitude, state.attitude) > th.max_ori_err ||
               state.lin_vel.norm() > th.max_lin_vel || state.ang_vel.norm() > th.max_ang_vel;
  d.trip_counter = d.exceeded ? trip_counter + 1 : 0;
  d.fallback = d.trip_counter >= th.trip_consecutive;
  return d;
}

Vec3 closest_on_segment(const Vec3& a, const Vec3& b, const Vec3& p) {
  const Vec3 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return a;
  const double s = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + s * ab;
}

RigidState perceive(const RigidState& truth, const LocalizationFault& fault) {
  RigidState s = truth;
  s.position += fault.offset;
  if (fault.rotation.norm() > 0.0) s.attitude = quat_mul(quat_from_rotvec(fault.rotation), truth.attitude).canonical();
  return s;
}

void MissionConfig::validate() const {
  env.validate();
  safety.validate();
  gains.validate();
  hold_gains.validate();
  if (!(dock_pos_tol > 0) || !(dock_ori_tol > 0)) throw ConfigError("dock tolerances must be positive");
}

ManeuverResult run_maneuver(const RigidState& entry, const Maneuver& maneuver, ControlMode controller,
                            const learn::ActorCritic* policy, const MissionConfig& config,
                            const ManeuverContext& ctx) {
  maneuver.validate();
  if (controller == ControlMode::kHoldFallback) throw ConfigError("HOLD_FALLBACK is not a selectable controller");
  if (controller == ControlMode::kRlPolicy) {
    if (!policy) throw ConfigError("RL_POLICY controller needs a loaded checkpoint");
    policy->validate();
  }
  const EnvConfig& env = config.env;
  const double dt = env.dt;
  const bool docking = maneuver.kind == ManeuverKind::kDock;
  const double pos_tol = docking ? config.dock_pos_tol : env.success_pos_tol;
  const double ori_tol = docking ? config.dock_ori_tol : env.success_ori_tol;
  const int ticks = std::max(1, static_cast<int>(std::ceil(maneuver.timeout / dt - 1e-9)));

  ManeuverResult res;
  res.goal = maneuver_goal(maneuver, entry, ctx.dock);
  res.log.start = entry;
  res.log.goal_position = res.goal.position;
  res.log.goal_attitude = res.goal.attitude;
  res.log.t0 = ctx.t0;
  res.log.rows.reserve(std::size_t(ticks));

  ControlMode mode = controller;
  Controller hold;
  int trip_counter = 0;
  int held = 0;
  Wrench prev;
  RigidState state = entry;

  for (int k = 0; k < ticks; ++k) {
    const bool faulted = ctx.fault && k >= ctx.fault->tick;
    const RigidState seen = faulted ? perceive(state, *ctx.fault) : state;

    if (mode == ControlMode::kRlPolicy) {
      // Position is checked against the commanded path, attitude against the goal.
      const PoseGoal ref{closest_on_segment(entry.position, res.goal.position, seen.position), res.goal.attitude};
      const SafetyDecision d = safety_check(seen, ref, config.safety, trip_counter);
      trip_counter = d.trip_counter;
      if (d.fallback) {
        mode = ControlMode::kHoldFallback;
        hold = hold_pose_controller(seen, config.hold_gains);
        res.trip_tick = k;
      }
    }

    Wrench commanded;
    Wrench applied;
    if (mode == ControlMode::kRlPolicy) {
      const auto action = learn::policy_action(*policy, observe(seen, {res.goal.position, res.goal.attitude}, policy->frame));
      for (int i = 0; i < 3; ++i) {
        commanded.force[i] = action[i] * env.limits.f_max;
        commanded.torque[i] = action[i + 3] * env.limits.tau_max;
      }
      applied = apply_limits(prev, denormalize_action(std::span<const double, kActionDim>(action), env.limits),
                             env.limits, dt);
    } else {
      commanded = mode == ControlMode::kBaseline ? pd_wrench_raw(seen, res.goal, config.gains) : hold(seen);
      applied = apply_limits(prev, commanded, env.limits, dt);
    }

    state = step(state, applied, env.body, env.mask, dt);
    prev = applied;

    LogRow row;
    row.t = ctx.t0 + (k + 1) * dt;
    row.state = state;
    row.applied = applied;
    row.commanded = commanded;
    const PoseError err = logged_pose_error(state, res.goal.position, res.goal.attitude);
    row.pos_err = err.position;
    row.ori_err = err.orientation;
    row.mode = mode;
    row.maneuver = ctx.index;
    row.blackout = maneuver.loss_of_signal;
    res.log.rows.push_back(row);

    held = within(state, res.goal, pos_tol, ori_tol, env) ? held + 1 : 0;
  }

  res.final_state = state;
  res.final_pos_err = (res.goal.position - state.position).norm();
  res.final_ori_err = quat_angle_between(res.goal.attitude, state.attitude);
  if (res.trip_tick) {
    res.outcome = ManeuverOutcome::kFallbackTriggered;
  } else if (held >= env.hold_steps) {
    res.outcome = ManeuverOutcome::kSuccess;
  } else {
    res.outcome = ManeuverOutcome::kTimeout;
  }
  return res;
}

int SequenceResult::successes() const {
  return static_cast<int>(std::count_if(records.begin(), records.end(),
                                        [](const ManeuverRecord& r) { return r.outcome == ManeuverOutcome::kSuccess; }));
}

SequenceResult run_sequence(const std::vector<Maneuver>& sequence, ControlMode controller,
                            const learn::ActorCritic* policy, const MissionConfig& config,
                            const std::vector<LocalizationFault>& faults, const RigidState& start) {
  if (sequence.empty()) throw ConfigError("maneuver sequence is empty");
  config.validate();
  SequenceResult out;
  out.log.start = start;
  const PoseGoal dock{start.position, start.attitude};
  RigidState state = start;
  double t = 0.0;
  bool halted = false;
  bool fell_back = false;

  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const Maneuver& m = sequence[i];
    ManeuverRecord rec;
    rec.index = static_cast<int>(i) + 1;
    rec.maneuver = m;
    rec.start_time = t;
    if (fell_back && !m.resume) halted = true;
    fell_back = false;
    if (halted) {
      rec.outcome = ManeuverOutcome::kSkipped;
      out.records.push_back(rec);
      continue;
    }
    ManeuverContext ctx;
    ctx.dock = dock;
    ctx.t0 = t;
    ctx.index = rec.index;
    for (const auto& f : faults) {
      if (f.maneuver == rec.index) ctx.fault = f;
    }
    ManeuverResult r = run_maneuver(state, m, controller, policy, config, ctx);
    rec.outcome = r.outcome;
    rec.duration = r.log.rows.back().t - t;
    rec.final_pos_err = r.final_pos_err;
    rec.final_ori_err = r.final_ori_err;
    if (r.trip_tick) rec.fallback_time = t + (*r.trip_tick) * config.env.dt;
    fell_back = r.outcome == ManeuverOutcome::kFallbackTriggered;
    out.log.rows.insert(out.log.rows.end(), r.log.rows.begin(), r.log.rows.end());
    state = r.final_state;
    t = r.log.rows.back().t;
    out.records.push_back(rec);
  }
  out.final_state = state;
  return out;
}

std::vector<Maneuver> parse_sequence(std::istream& is, const std::string& source) {
  std::vector<Maneuver> out;
  for_each_line(is, [&](const std::string& text, int line) { out.push_back(parse_line(tokenize(text), source, line)); });
  if (out.empty()) throw ConfigError(source + ": no maneuvers");
  return out;
}

std::vector<Maneuver> load_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sequence file " + path);
  return parse_sequence(in, path);
}

Maneuver parse_maneuver_spec(const std::string& spec) {
  if (spec == "undock") {
    Maneuver m;
    m.kind = ManeuverKind::kTranslate;
    m.axis = {1, 0, 0};
    m.magnitude = 0.5;
    m.timeout = 30.0;
    m.label = "Undock (+0.5 m X-axis translation)";
    return m;
  }
  std::string text = spec;
  // goto_pose positions use commas themselves, so only the separators between fields are replaced.
  std::vector<std::string> fields;
  std::stringstream ss(text);
  for (std::string f; ss >> f;) fields.push_back(f);
  if (fields.size() == 1) {
    std::string one = fields[0];
    fields.clear();
    std::stringstream cs(one);
    for (std::string f; std::getline(cs, f, ',');) fields.push_back(f);
  }
  return parse_line(fields, "maneuver", 1);
}

std::vector<LocalizationFault> parse_faults(std::istream& is, const std::string& source) {
  std::vector<LocalizationFault> out;
  for_each_line(is, [&](const std::string& text, int line) {
    std::istringstream ls(text);
    std::vector<std::string> tok;
    for (std::string s; ls >> s;) tok.push_back(s);
    if (tok.size() != 5 && tok.size() != 8) parse_error(source, line, "expected 'maneuver tick dx dy dz [rx ry rz]'");
    LocalizationFault f;
    const double m = parse_number(tok[0], "maneuver index", source, line);
    const double tick = parse_number(tok[1], "tick", source, line);
    if (m < 1 || m != std::floor(m)) parse_error(source, line, "maneuver index must be a positive integer");
    if (tick < 0 || tick != std::floor(tick)) parse_error(source, line, "tick must be a non-negative integer");
    f.maneuver = static_cast<int>(m);
    f.tick = static_cast<int>(tick);
    for (int i = 0; i < 3; ++i) f.offset[i] = parse_number(tok[2 + i], "offset", source, line);
    if (tok.size() == 8) {
      for (int i = 0; i < 3; ++i) f.rotation[i] = parse_number(tok[5 + i], "rotation", source, line) * kDeg;
    }
    out.push_back(f);
  });
  return out;
}

std::vector<LocalizationFault> load_faults(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open fault file " + path);
  return parse_faults(in, path);
}

void write_outcomes_csv(std::ostream& os, const SequenceResult& result) {
  os << "index,maneuver,outcome,start_time,duration,final_pos_err,final_ori_err,fallback_time,loss_of_signal\n";
  char buf[256];
  for (const auto& r : result.records) {
    std::string name = describe(r.maneuver);
    std::replace(name.begin(), name.end(), ',', ';');
    const bool ran = r.outcome != ManeuverOutcome::kSkipped;
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.10g,%.10g,%.6f,%d\n", r.start_time, r.duration,
                  ran ? r.final_pos_err : kNaN, ran ? r.final_ori_err : kNaN,
                  r.fallback_time ? *r.fallback_time : kNaN, r.maneuver.loss_of_signal ? 1 : 0);
    os << r.index << ',' << name << ',' << to_string(r.outcome) << buf;
  }
}

void write_outcomes_list(std::ostream& os, const SequenceResult& result) {
  for (const auto& r : result.records) {
    os << r.index << ". " << describe(r.maneuver) << " - " << to_string(r.outcome);
    if (r.fallback_time) os << " (hold-pose fallback at t=" << fmt("%.2f", *r.fallback_time) << " s)";
    if (r.maneuver.loss_of_signal && r.outcome != ManeuverOutcome::kSkipped) os << " during loss of signal";
    os << '\n';
  }
  os << result.successes() << "/" << result.records.size() << " succeeded\n";
}

MetricSet compute_metrics(const TrajectoryLog& log, const MetricTolerances& tol) {
  if (log.rows.empty()) throw std::invalid_argument("metrics need a non-empty log");
  if (!log.start || !log.goal_position || !log.goal_attitude) {
    throw std::invalid_argument("metrics need a log with start and goal pose");
  }
  const RigidState& start = *log.start;
  const Vec3 goal = *log.goal_position;
  const Quat goal_att = *log.goal_attitude;
  MetricSet m;
  const LogRow& last = log.rows.back();
  m.final_pos_err = last.pos_err;
  m.final_ori_err = last.ori_err;
  m.final_pos_norm = last.pos_err.norm();
  m.final_ori_norm = last.ori_err.norm();

  auto inside = [&](const Vec3& pe, const Vec3& oe) { return pe.norm() < tol.pos && oe.norm() < tol.ori; };
  const PoseError e0 = logged_pose_error(start, goal, goal_att);
  std::ptrdiff_t last_bad = inside(e0.position, e0.orientation) ? -2 : -1;  // -1 is the start state
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    if (!inside(log.rows[i].pos_err, log.rows[i].ori_err)) last_bad = static_cast<std::ptrdiff_t>(i);
  }
  if (last_bad == -2) {
    m.settle_time = 0.0;
  } else if (last_bad + 1 < static_cast<std::ptrdiff_t>(log.rows.size())) {
    m.settle_time = log.rows[std::size_t(last_bad + 1)].t - log.t0;
  } else {
    m.settle_time = kNaN;
  }

  const Vec3 line = goal - start.position;
  const double len = line.norm();
  Vec3 prev_p = start.position;
  double prev_t = log.t0;
  for (const auto& r : log.rows) {
    const Vec3 d = r.state.position - start.position;
    const double cross_dist = len > 1e-12 ? cross(d, line).norm() / len : d.norm();
    m.max_cross_axis = std::max(m.max_cross_axis, cross_dist);
    m.path_length += (r.state.position - prev_p).norm();
    m.force_effort += r.applied.force.norm() * (r.t - prev_t);
    m.torque_effort += r.applied.torque.norm() * (r.t - prev_t);
    prev_p = r.state.position;
    prev_t = r.t;
  }
  return m;
}

MetricReport compare_metrics(const TrajectoryLog& log_rl, const TrajectoryLog& log_baseline,
                             const MetricTolerances& tol) {
  if (log_rl.start != log_baseline.start || log_rl.goal_position != log_baseline.goal_position ||
      log_rl.goal_attitude != log_baseline.goal_attitude) {
    throw std::invalid_argument("compare_metrics: logs are not of the same maneuver");
  }
  MetricReport rep;
  rep.rl = compute_metrics(log_rl, tol);
  rep.baseline = compute_metrics(log_baseline, tol);
  const MetricSet& a = rep.rl;
  const MetricSet& b = rep.baseline;
  MetricSet& d = rep.difference;
  d.final_pos_err = a.final_pos_err - b.final_pos_err;
  d.final_ori_err = a.final_ori_err - b.final_ori_err;
  d.final_pos_norm = a.final_pos_norm - b.final_pos_norm;
  d.final_ori_norm = a.final_ori_norm - b.final_ori_norm;
  d.settle_time = (std::isnan(a.settle_time) && std::isnan(b.settle_time)) ? 0.0 : a.settle_time - b.settle_time;
  d.max_cross_axis = a.max_cross_axis - b.max_cross_axis;
  d.path_length = a.path_length - b.path_length;
  d.force_effort = a.force_effort - b.force_effort;
  d.torque_effort = a.torque_effort - b.torque_effort;
  rep.baseline_less_final_error = b.final_pos_norm < a.final_pos_norm;
  rep.rl_more_cross_axis = a.max_cross_axis > b.max_cross_axis;
  return rep;
}

void write_metric_report_csv(std::ostream& os, const MetricReport& rep) {
  os << "metric,rl,baseline,difference\n";
  auto row = [&os](const char* name, double a, double b, double d) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%.10g\n", name, a, b, d);
    os << buf;
  };
  const MetricSet& a = rep.rl;
  const MetricSet& b = rep.baseline;
  const MetricSet& d = rep.difference;
  const char* pos_names[] = {"final_pos_err_x", "final_pos_err_y", "final_pos_err_z"};
  const char* ori_names[] = {"final_ori_err_x", "final_ori_err_y", "final_ori_err_z"};
  for (int i = 0; i < 3; ++i) row(pos_names[i], a.final_pos_err[i], b.final_pos_err[i], d.final_pos_err[i]);
  for (int i = 0; i < 3; ++i) row(ori_names[i], a.final_ori_err[i], b.final_ori_err[i], d.final_ori_err[i]);
  row("final_pos_norm", a.final_pos_norm, b.final_pos_norm, d.final_pos_norm);
  row("final_ori_norm", a.final_ori_norm, b.final_ori_norm, d.final_ori_norm);
  row("settle_time", a.settle_time, b.settle_time, d.settle_time);
  row("max_cross_axis", a.max_cross_axis, b.max_cross_axis, d.max_cross_axis);
  row("path_length", a.path_length, b.path_length, d.path_length);
  row("force_effort", a.force_effort, b.force_effort, d.force_effort);
  row("torque_effort", a.torque_effort, b.torque_effort, d.torque_effort);
  row("baseline_less_final_error", rep.baseline_less_final_error, rep.baseline_less_final_error, 0.0);
  row("rl_more_cross_axis", rep.rl_more_cross_axis, rep.rl_more_cross_axis, 0.0);
}

void write_error_table(std::ostream& os, const TrajectoryLog& rl, const TrajectoryLog& base) {
  os << "# t baseline_pos_err baseline_ori_err_deg rl_pos_err rl_ori_err_deg\n";
  const std::size_t n = std::max(rl.rows.size(), base.rows.size());
  char buf[160];
  for (std::size_t i = 0; i < n; ++i) {
    const LogRow* b = i < base.rows.size() ? &base.rows[i] : nullptr;
    const LogRow* r = i < rl.rows.size() ? &rl.rows[i] : nullptr;
    std::snprintf(buf, sizeof buf, "%.4f %.9g %.9g %.9g %.9g\n", (b ? b->t : r->t), b ? b->pos_err.norm() : kNaN,
                  b ? b->ori_err.norm() / kDeg : kNaN, r ? r->pos_err.norm() : kNaN,
                  r ? r->ori_err.norm() / kDeg : kNaN);
    os << buf;
  }
}

}  // namespace apiary
