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

#include "apiary/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "apiary/error.hpp"

namespace apiary {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

// Shortest text that parses back to exactly v.
std::string num(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Text t with parse(t) * scale == stored, so scaled keys (degrees) survive a
// format/parse round trip bit for bit. Searches a few ulps around
// stored / scale and keeps the shortest hit.
std::string num_scaled(double stored, double scale) {
  if (scale == 1.0) return num(stored);
  const double centre = stored / scale;
  std::string best;
  double below = centre;
  double above = centre;
  for (int i = 0; i <= 8; ++i) {
    for (double d : {below, above}) {
      std::string s = num(d);
      if (std::stod(s) * scale == stored && (best.empty() || s.size() < best.size())) best = std::move(s);
    }
    below = std::nextafter(below, -INFINITY);
    above = std::nextafter(above, INFINITY);
  }
  return best.empty() ? num(centre) : best;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("expected a number, got '" + s + "'");
  return v;
}

long long to_integer(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) {
    // Accept integral values written in exponent form, e.g. 3e6.
    const double d = to_double(s);
    if (d != std::floor(d) || std::abs(d) > 9.0e18) throw std::invalid_argument("expected an integer, got '" + s + "'");
    return static_cast<long long>(d);
  }
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::invalid_argument("expected true or false, got '" + s + "'");
}

struct Key {
  std::string section;
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

using DoubleRef = std::function<double&(RunConfig&)>;

Key real(const char* sec, const char* name, DoubleRef ref, double scale = 1.0) {
  return {sec, name, [ref, scale](RunConfig& c, const std::string& v) { ref(c) = to_double(v) * scale; },
          [ref, scale](const RunConfig& c) { return num_scaled(ref(const_cast<RunConfig&>(c)), scale); }};
}

Key integer(const char* sec, const char* name, std::function<int&(RunConfig&)> ref) {
  return {sec, name,
          [ref](RunConfig& c, const std::string& v) {
            const long long x = to_integer(v);
            if (x < -2147483647LL || x > 2147483647LL) throw std::invalid_argument("integer out of range");
            ref(c) = static_cast<int>(x);
          },
          [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); }};
}

Key flag(const char* sec, const char* name, std::function<bool&(RunConfig&)> ref) {
  return {sec, name, [ref](RunConfig& c, const std::string& v) { ref(c) = to_bool(v); },
          [ref](const RunConfig& c) { return std::string(ref(const_cast<RunConfig&>(c)) ? "true" : "false"); }};
}

// One value for all three axes or three values.
Key triple(const char* sec, const char* name, std::function<Vec3&(RunConfig&)> ref, double scale = 1.0) {
  return {sec, name,
          [ref, scale](RunConfig& c, const std::string& v) {
            const auto w = words(v);
            if (w.size() == 1) {
              const double x = to_double(w[0]) * scale;
              ref(c) = {x, x, x};
            } else if (w.size() == 3) {
              ref(c) = Vec3{to_double(w[0]), to_double(w[1]), to_double(w[2])} * scale;
            } else {
              throw std::invalid_argument("expected 1 or 3 numbers");
            }
          },
          [ref, scale](const RunConfig& c) {
            const Vec3 x = ref(const_cast<RunConfig&>(c));
            return num_scaled(x.x, scale) + " " + num_scaled(x.y, scale) + " " + num_scaled(x.z, scale);
          }};
}

// "none" disables the limit.
Key rate(const char* sec, const char* name, std::function<std::optional<double>&(RunConfig&)> ref) {
  return {sec, name,
          [ref](RunConfig& c, const std::string& v) {
            if (v == "none") {
              ref(c).reset();
            } else {
              ref(c) = to_double(v);
            }
          },
          [ref](const RunConfig& c) {
            const auto& x = ref(const_cast<RunConfig&>(c));
            return x ? num(*x) : std::string("none");
          }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    // body
    k.push_back(real("body", "mass", [](RunConfig& c) -> double& { return c.env.body.mass; }));
    k.push_back(triple("body", "inertia", [](RunConfig& c) -> Vec3& { return c.env.body.inertia_diag; }));
    k.push_back(triple("body", "com_offset", [](RunConfig& c) -> Vec3& { return c.env.body.com_offset; }));
    // actuation
    k.push_back(real("actuation", "f_max", [](RunConfig& c) -> double& { return c.env.limits.f_max; }));
    k.push_back(real("actuation", "tau_max", [](RunConfig& c) -> double& { return c.env.limits.tau_max; }));
    k.push_back(rate("actuation", "force_rate",
                     [](RunConfig& c) -> std::optional<double>& { return c.env.limits.force_rate; }));
    k.push_back(rate("actuation", "torque_rate",
                     [](RunConfig& c) -> std::optional<double>& { return c.env.limits.torque_rate; }));
    // env
    k.push_back({"env", "mode",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "iss6dof") {
                     c.env.mask = DofMask::full_6dof();
                   } else if (v == "granite3dof") {
                     c.env.mask = DofMask::granite_3dof();
                   } else {
                     throw std::invalid_argument("expected iss6dof or granite3dof, got '" + v + "'");
                   }
                 },
                 [](const RunConfig& c) {
                   if (c.env.mask == DofMask::full_6dof()) return std::string("iss6dof");
                   if (c.env.mask == DofMask::granite_3dof()) return std::string("granite3dof");
                   throw std::logic_error("DOF mask has no config name");
                 }});
    k.push_back({"env", "obs_frame",
                 [](RunConfig& c, const std::string& v) {
                   if (v == "world") {
                     c.env.obs_frame = ObsFrame::kWorld;
                   } else if (v == "body") {
                     c.env.obs_frame = ObsFrame::kBody;
                   } else {
                     throw std::invalid_argument("expected world or body, got '" + v + "'");
                   }
                 },
                 [](const RunConfig& c) { return std::string(c.env.obs_frame == ObsFrame::kBody ? "body" : "world"); }});
    k.push_back(triple("env", "goal_pos_range", [](RunConfig& c) -> Vec3& { return c.env.goal_pos_range; }));
    k.push_back(triple("env", "goal_ang_range_deg", [](RunConfig& c) -> Vec3& { return c.env.goal_ang_range; }, kDeg));
    k.push_back(real("env", "mass_min", [](RunConfig& c) -> double& { return c.env.mass_min; }));
    k.push_back(real("env", "mass_max", [](RunConfig& c) -> double& { return c.env.mass_max; }));
    k.push_back(integer("env", "episode_len", [](RunConfig& c) -> int& { return c.env.episode_len; }));
    k.push_back(real("env", "success_pos_tol", [](RunConfig& c) -> double& { return c.env.success_pos_tol; }));
    k.push_back(
        real("env", "success_ori_tol_deg", [](RunConfig& c) -> double& { return c.env.success_ori_tol; }, kDeg));
    k.push_back(real("env", "success_vel_tol", [](RunConfig& c) -> double& { return c.env.success_vel_tol; }));
    k.push_back(real("env", "success_angvel_tol", [](RunConfig& c) -> double& { return c.env.success_angvel_tol; }));
    k.push_back(integer("env", "hold_steps", [](RunConfig& c) -> int& { return c.env.hold_steps; }));
    k.push_back(real("env", "oob_radius", [](RunConfig& c) -> double& { return c.env.oob_radius; }));
    k.push_back(real("env", "dt", [](RunConfig& c) -> double& { return c.env.dt; }));
    // reward
    k.push_back(real("reward", "w_pos", [](RunConfig& c) -> double& { return c.reward.w_pos; }));
    k.push_back(real("reward", "w_ori", [](RunConfig& c) -> double& { return c.reward.w_ori; }));
    k.push_back(real("reward", "w_linvel", [](RunConfig& c) -> double& { return c.reward.w_linvel; }));
    k.push_back(real("reward", "w_angvel", [](RunConfig& c) -> double& { return c.reward.w_angvel; }));
    k.push_back(real("reward", "bonus_success", [](RunConfig& c) -> double& { return c.reward.bonus_success; }));
    k.push_back(real("reward", "penalty_oob", [](RunConfig& c) -> double& { return c.reward.penalty_oob; }));
    // ppo
    k.push_back(real("ppo", "gamma", [](RunConfig& c) -> double& { return c.ppo.gamma; }));
    k.push_back(real("ppo", "lam", [](RunConfig& c) -> double& { return c.ppo.lam; }));
    k.push_back(real("ppo", "clip_eps", [](RunConfig& c) -> double& { return c.ppo.clip_eps; }));
    k.push_back(real("ppo", "lr", [](RunConfig& c) -> double& { return c.ppo.lr; }));
    k.push_back(flag("ppo", "lr_anneal", [](RunConfig& c) -> bool& { return c.ppo.lr_anneal; }));
    k.push_back(integer("ppo", "epochs_per_update", [](RunConfig& c) -> int& { return c.ppo.epochs_per_update; }));
    k.push_back(integer("ppo", "minibatch_size", [](RunConfig& c) -> int& { return c.ppo.minibatch_size; }));
    k.push_back(real("ppo", "value_coef", [](RunConfig& c) -> double& { return c.ppo.value_coef; }));
    k.push_back(real("ppo", "entropy_coef", [](RunConfig& c) -> double& { return c.ppo.entropy_coef; }));
    k.push_back(real("ppo", "max_grad_norm", [](RunConfig& c) -> double& { return c.ppo.max_grad_norm; }));
    k.push_back({"ppo", "total_env_steps",
                 [](RunConfig& c, const std::string& v) { c.ppo.total_env_steps = to_integer(v); },
                 [](const RunConfig& c) { return std::to_string(c.ppo.total_env_steps); }});
    k.push_back(integer("ppo", "n_envs", [](RunConfig& c) -> int& { return c.ppo.n_envs; }));
    k.push_back(integer("ppo", "horizon", [](RunConfig& c) -> int& { return c.ppo.horizon; }));
    k.push_back({"ppo", "hidden",
                 [](RunConfig& c, const std::string& v) {
                   std::vector<int> h;
                   for (const auto& w : words(v)) h.push_back(static_cast<int>(to_integer(w)));
                   if (h.empty()) throw std::invalid_argument("expected layer sizes");
                   c.ppo.hidden = h;
                 },
                 [](const RunConfig& c) {
                   std::string s;
                   for (int h : c.ppo.hidden) s += (s.empty() ? "" : " ") + std::to_string(h);
                   return s;
                 }});
    k.push_back(real("ppo", "init_log_std", [](RunConfig& c) -> double& { return c.ppo.init_log_std; }));
    k.push_back(integer("ppo", "eval_interval", [](RunConfig& c) -> int& { return c.ppo.eval_interval; }));
    k.push_back(integer("ppo", "eval_episodes", [](RunConfig& c) -> int& { return c.ppo.eval_episodes; }));
    // baseline_gains
    k.push_back(real("baseline_gains", "kp_pos", [](RunConfig& c) -> double& { return c.gains.kp_pos; }));
    k.push_back(real("baseline_gains", "kd_pos", [](RunConfig& c) -> double& { return c.gains.kd_pos; }));
    k.push_back(real("baseline_gains", "kp_att", [](RunConfig& c) -> double& { return c.gains.kp_att; }));
    k.push_back(real("baseline_gains", "kd_att", [](RunConfig& c) -> double& { return c.gains.kd_att; }));
    k.push_back(real("baseline_gains", "hold_kp_pos", [](RunConfig& c) -> double& { return c.hold_gains.kp_pos; }));
    k.push_back(real("baseline_gains", "hold_kd_pos", [](RunConfig& c) -> double& { return c.hold_gains.kd_pos; }));
    k.push_back(real("baseline_gains", "hold_kp_att", [](RunConfig& c) -> double& { return c.hold_gains.kp_att; }));
    k.push_back(real("baseline_gains", "hold_kd_att", [](RunConfig& c) -> double& { return c.hold_gains.kd_att; }));
    // safety
    k.push_back(real("safety", "max_pos_err", [](RunConfig& c) -> double& { return c.safety.max_pos_err; }));
    k.push_back(
        real("safety", "max_ori_err_deg", [](RunConfig& c) -> double& { return c.safety.max_ori_err; }, kDeg));
    k.push_back(real("safety", "max_lin_vel", [](RunConfig& c) -> double& { return c.safety.max_lin_vel; }));
    k.push_back(real("safety", "max_ang_vel", [](RunConfig& c) -> double& { return c.safety.max_ang_vel; }));
    k.push_back(integer("safety", "trip_consecutive", [](RunConfig& c) -> int& { return c.safety.trip_consecutive; }));
    k.push_back(real("safety", "dock_pos_tol", [](RunConfig& c) -> double& { return c.dock_pos_tol; }));
    k.push_back(real("safety", "dock_ori_tol_deg", [](RunConfig& c) -> double& { return c.dock_ori_tol; }, kDeg));
    // logging
    k.push_back(flag("logging", "progress", [](RunConfig& c) -> bool& { return c.logging.progress; }));
    k.push_back(flag("logging", "trainer_state", [](RunConfig& c) -> bool& { return c.logging.trainer_state; }));
    // seed
    k.push_back({"seed", "seed",
                 [](RunConfig& c, const std::string& v) {
                   std::size_t used = 0;
                   unsigned long long x = 0;
                   try {
                     x = std::stoull(v, &used);
                   } catch (const std::exception&) {
                     used = 0;
                   }
                   if (used != v.size() || v.empty() || v[0] == '-') {
                     throw std::invalid_argument("expected a non-negative integer seed, got '" + v + "'");
                   }
                   c.seed = x;
                 },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    return k;
  }();
  return table;
}

}  // namespace

void RunConfig::validate() const {
  try {
    env.validate();
    reward.validate();
    gains.validate();
    hold_gains.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  ppo.validate();
  safety.validate();
  if (!(dock_pos_tol > 0) || !(dock_ori_tol > 0)) throw ConfigError("dock tolerances must be positive");
}

MissionConfig RunConfig::mission() const {
  MissionConfig m;
  m.env = env;
  m.dock_pos_tol = dock_pos_tol;
  m.dock_ori_tol = dock_ori_tol;
  m.safety = safety;
  m.gains = gains;
  m.hold_gains = hold_gains;
  return m;
}

RunConfig parse_run_config(std::istream& is, const std::string& source) {
  RunConfig cfg;
  std::set<std::string> sections;
  for (const auto& k : keys()) sections.insert(k.section);
  std::set<std::string> seen;
  std::string section;
  std::string raw;
  int line = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
  };
  while (std::getline(is, raw)) {
    ++line;
    std::string text = raw;
    if (const auto c = text.find_first_of("#;"); c != std::string::npos) text.erase(c);
    text = trim(text);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') fail("malformed section header '" + text + "'");
      section = trim(text.substr(1, text.size() - 2));
      if (!sections.count(section)) fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    if (section.empty()) fail("key outside of any section");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    const Key* match = nullptr;
    for (const auto& k : keys()) {
      if (k.section == section && k.name == key) match = &k;
    }
    if (!match) fail("unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(section + "." + key).second) fail("duplicate key '" + key + "' in [" + section + "]");
    if (value.empty()) fail("missing value for '" + key + "'");
    try {
      match->set(cfg, value);
    } catch (const std::invalid_argument& e) {
      fail(key + ": " + e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

RunConfig parse_run_config_text(const std::string& text, const std::string& source) {
  std::istringstream is(text);
  return parse_run_config(is, source);
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_run_config(in, path);
}

std::string format_run_config(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& k : keys()) {
    if (k.section != section) {
      section = k.section;
      out += (out.empty() ? "[" : "\n[") + section + "]\n";
    }
    out += k.name + " = " + k.get(config) + "\n";
  }
  return out;
}

}  // namespace apiary
