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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
//
//   acceptance [--only N[,N...]] [--artifacts DIR] [--data DIR] [--workers N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "apiary/baseline.hpp"
#include "apiary/commands.hpp"
#include "apiary/config.hpp"
#include "apiary/dynamics.hpp"
#include "apiary/learn/checkpoint.hpp"
#include "apiary/learn/ppo.hpp"
#include "apiary/learn/train.hpp"
#include "apiary/mission.hpp"
#include "apiary/parallel.hpp"

#ifndef APIARY_DATA_DIR
#define APIARY_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace apiary;

namespace {

constexpr double kDeg = std::numbers::pi / 180;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Context {
  fs::path artifacts;
  fs::path data;
  int workers = 0;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- 1 ----------------------------------------------------------------------

// Relative error of position (constant force) and rotation angle (constant
// torque about a principal axis) after 1 s from rest.
std::pair<double, double> constant_wrench_errors(double dt) {
  BodyParams body;
  body.mass = 10.0;
  body.inertia_diag = {0.12, 0.15, 0.2};
  // Separate runs: a body-frame force on a spinning body would not be constant in world axes.
  const int n = static_cast<int>(std::lround(1.0 / dt));
  RigidState sf, st;
  for (int i = 0; i < n; ++i) {
    sf = step(sf, Wrench{{1.0, 0, 0}, {}}, body, DofMask::full_6dof(), dt);
    st = step(st, Wrench{{}, {0, 0, 0.01}}, body, DofMask::full_6dof(), dt);
  }
  const double x_exact = 1.0 / (2 * body.mass);
  const double th_exact = 0.01 / (2 * body.inertia_diag.z);
  const double th = quat_to_rotvec(st.attitude).z;
  return {std::abs(sf.position.x - x_exact) / x_exact, std::abs(th - th_exact) / th_exact};
}

Verdict criterion_dynamics(const Context&) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto [ex, eth] = constant_wrench_errors(1e-4);
  const auto [ex2, eth2] = constant_wrench_errors(5e-5);
  const double runtime = seconds_since(t0);
  const double rx = ex / ex2;
  const double rth = eth / eth2;
  const bool ok = ex <= 1e-4 && eth <= 1e-4 && std::abs(rx - 2) < 0.01 && std::abs(rth - 2) < 0.01 && runtime < 5.0;
  return {ok, fmt("rel err force %.12e torque %.12e (bound 1e-4); halving ratio %.4f / %.4f; %.2f s", ex, eth, rx, rth,
                  runtime)};
}

// ---- 2 ----------------------------------------------------------------------

Verdict criterion_conservation(const Context&) {
  BodyParams body;
  body.inertia_diag = {0.11, 0.15, 0.19};
  RigidState s;
  s.lin_vel = {0.03, -0.02, 0.01};
  s.ang_vel = {0.4, -0.7, 0.25};  // tumbling about no principal axis
  s.attitude = quat_from_axis_angle({1, 2, 3}, 0.7);
  const Momentum m0 = momentum(s, body);
  bool linear_exact = true;
  double worst_ang = 0.0;
  for (int i = 0; i < 10000; ++i) {
    s = step(s, Wrench{}, body, DofMask::full_6dof(), 0.016);
    const Momentum m = momentum(s, body);
    linear_exact = linear_exact && m.linear == m0.linear;
    worst_ang = std::max(worst_ang, (m.angular - m0.angular).norm() / m0.angular.norm());
  }
  return {linear_exact && worst_ang < 1e-6,
          fmt("linear momentum bit-exact: %s; max angular momentum drift %.3e relative (bound 1e-6)",
              linear_exact ? "yes" : "no", worst_ang)};
}

// ---- 3 ----------------------------------------------------------------------

Verdict criterion_gradient(const Context&) {
  using namespace learn;
  const auto t0 = std::chrono::steady_clock::now();
  ActorCritic policy = ActorCritic::create({64, 64}, -0.5, 2024);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  for (double& w : policy.actor.data) w += 0.05 * g(rng);
  ActorCritic old = policy;
  for (double& w : old.actor.data) w += 0.05 * g(rng);

  RolloutBuffer buf;
  buf.resize(1, 32);
  for (std::size_t k = 0; k < buf.size(); ++k) {
    std::array<double, kObsDim> x{};
    for (double& v : x) v = 0.5 * g(rng);
    const PolicyStep s = policy_sample(old, std::span<const double, kObsDim>(x), rng);
    std::copy(x.begin(), x.end(), buf.obs.begin() + k * kObsDim);
    std::copy(s.action.begin(), s.action.end(), buf.actions.begin() + k * kActionDim);
    buf.log_probs[k] = s.log_prob;
    buf.values[k] = s.value;
    buf.rewards[k] = g(rng);
  }
  buf.bootstrap[0] = 0.0;
  compute_advantages(buf, 0.99, 0.95);
  std::vector<std::size_t> idx(buf.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const std::vector<double> adv = normalize_advantages(buf.advantages);
  PpoConfig cfg;
  cfg.entropy_coef = 0.01;

  ParamGrad grad;
  const LossTerms at = ppo_loss_and_grad(policy, buf, idx, adv, cfg, grad);
  const double h = 1e-5;
  auto worst_for = [&](auto get, const std::vector<double>& analytic) {
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
      ActorCritic a = policy, b = policy;
      get(a)[i] += h;
      get(b)[i] -= h;
      const double fd = (ppo_loss(a, buf, idx, adv, cfg).total - ppo_loss(b, buf, idx, adv, cfg).total) / (2 * h);
      const double denom = std::max({std::abs(fd), std::abs(analytic[i]), 1e-6});
      worst = std::max(worst, std::abs(fd - analytic[i]) / denom);
    }
    return worst;
  };
  const double ea = worst_for([](ActorCritic& p) -> std::vector<double>& { return p.actor.data; }, grad.actor);
  const double es = worst_for([](ActorCritic& p) -> std::vector<double>& { return p.log_std; }, grad.log_std);
  const double ec = worst_for([](ActorCritic& p) -> std::vector<double>& { return p.critic.data; }, grad.critic);
  const double runtime = seconds_since(t0);
  const std::size_t n = grad.actor.size() + grad.log_std.size() + grad.critic.size();
  return {std::max({ea, es, ec}) < 1e-4 && runtime < 60.0,
          fmt("%zu parameters, clip fraction %.2f; max rel err actor %.2e log_std %.2e critic %.2e; %.1f s", n,
              at.clip_fraction, ea, es, ec, runtime)};
}

// ---- 4 ----------------------------------------------------------------------

Verdict criterion_gae(const Context&) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> len(1, 200);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g;
  double worst = 0.0;
  int dones = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = std::size_t(len(rng));
    std::vector<double> r(n), v(n), adv(n), ret(n);
    std::vector<std::uint8_t> d(n);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = g(rng);
      v[i] = g(rng);
      d[i] = u(rng) < 0.05;
      dones += d[i];
    }
    const double boot = g(rng), gamma = u(rng), lam = u(rng);
    learn::gae(r, v, d, boot, gamma, lam, adv, ret);
    for (std::size_t t = 0; t < n; ++t) {
      double sum = 0.0, w = 1.0;
      for (std::size_t k = t; k < n; ++k) {
        const double next = k + 1 < n ? v[k + 1] : boot;
        sum += w * (r[k] + gamma * next * (d[k] ? 0.0 : 1.0) - v[k]);
        if (d[k]) break;
        w *= gamma * lam;
      }
      worst = std::max(worst, std::abs(sum - adv[t]));
    }
  }
  return {worst < 1e-10, fmt("1000 instances, %d done flags; max |error| %.3e (bound 1e-10)", dones, worst)};
}

// ---- 5 ----------------------------------------------------------------------

Verdict criterion_baseline(const Context&) {
  Maneuver m = parse_maneuver_spec("undock");
  const ManeuverResult r = run_maneuver(RigidState{}, m, ControlMode::kBaseline, nullptr, MissionConfig{});
  const MetricSet ms = compute_metrics(r.log);
  const double t_end = r.log.rows.back().t;
  const bool ok = r.final_pos_err < 0.01 && r.final_ori_err < 0.5 * kDeg && ms.max_cross_axis < 1e-6 && t_end <= 30.0 + 1e-9;
  return {ok, fmt("final |pos_err| %.2e m, |ori_err| %.2e deg, cross-axis %.2e m after %.2f s (outcome %s)",
                  r.final_pos_err, r.final_ori_err / kDeg, ms.max_cross_axis, t_end,
                  std::string(to_string(r.outcome)).c_str())};
}

// ---- 6 and 7 ----------------------------------------------------------------

struct Trained {
  learn::Checkpoint ckpt;
  RunConfig cfg;
  double wall = 0.0;
  long long env_steps = 0;
};

Trained train_run(const Context& ctx, RunConfig cfg, const std::string& name) {
  const fs::path dir = ctx.artifacts / name;
  fs::create_directories(dir);
  std::ofstream curve(dir / "curve.csv");
  learn::TrainOptions opt;
  opt.workers = ctx.workers;
  opt.checkpoint_path = (dir / "policy.ckpt").string();
  opt.curve_csv = &curve;
  opt.progress = &std::cerr;
  opt.config_text = format_run_config(cfg);
  std::ofstream(dir / "config.ini") << opt.config_text;
  std::cerr << "training " << name << " (" << cfg.ppo.total_env_steps << " env steps)\n";
  const auto t0 = std::chrono::steady_clock::now();
  learn::TrainResult res = learn::train(cfg.env, cfg.reward, cfg.ppo, cfg.seed, opt);
  return {std::move(res.best), cfg, seconds_since(t0), res.env_steps};
}

double held_out_success(const Context& ctx, const Trained& t, std::optional<double> mass_scale = {}) {
  EnvConfig env = t.cfg.env;
  if (mass_scale) env.mass_min = env.mass_max = *mass_scale;
  const auto seeds = learn::seed_bank(learn::kHeldOutBankSalt, 100);
  return learn::evaluate(t.ckpt.policy, env, t.cfg.reward, seeds, ctx.workers).success_rate;
}

std::optional<Trained> g_default;

const Trained& default_policy(const Context& ctx) {
  if (!g_default) g_default = train_run(ctx, RunConfig{}, "default");
  return *g_default;
}

Verdict criterion_training(const Context& ctx) {
  const Trained& t = default_policy(ctx);
  const double s = held_out_success(ctx, t);
  return {s >= 0.9 && t.env_steps <= 3'000'000,
          fmt("held-out success %.2f over 100 episodes (bar 0.90) after %lld env steps; training wall time %.0f s on "
              "%d worker(s)",
              s, t.env_steps, t.wall, resolve_workers(ctx.workers))};
}

Verdict criterion_robustness(const Context& ctx) {
  const Trained& rand = default_policy(ctx);
  const double r_lo = held_out_success(ctx, rand, 0.75);
  const double r_hi = held_out_success(ctx, rand, 1.25);

  RunConfig fixed_cfg;
  fixed_cfg.env.mass_min = fixed_cfg.env.mass_max = 1.0;
  const Trained fixed = train_run(ctx, fixed_cfg, "fixed_mass");
  const double f_nom = held_out_success(ctx, fixed, 1.0);
  const double f_lo = held_out_success(ctx, fixed, 0.75);
  const double f_hi = held_out_success(ctx, fixed, 1.25);
  const double drop = f_nom - 0.5 * (f_lo + f_hi);
  const bool ok = r_lo >= 0.8 && r_hi >= 0.8 && drop >= 0.10;
  return {ok, fmt("randomized policy: %.2f at 0.75x, %.2f at 1.25x (bar 0.80); fixed-mass policy: %.2f nominal, "
                  "%.2f / %.2f on the sweep, drop %.0f pp (bar 10 pp)",
                  r_lo, r_hi, f_nom, f_lo, f_hi, 100 * drop)};
}

// ---- 8 ----------------------------------------------------------------------

Verdict criterion_replay(const Context& ctx) {
  const fs::path ckpt_path = ctx.data / "reference.ckpt";
  if (!fs::exists(ckpt_path)) return {false, "missing " + ckpt_path.string()};
  const learn::Checkpoint ckpt = learn::load_checkpoint(ckpt_path.string());
  RunConfig cfg = parse_run_config_text(ckpt.meta.config_text, "reference checkpoint");
  const MissionConfig mc = cfg.mission();
  const auto seq = load_sequence((ctx.data / "apiary_sequence.txt").string());
  const auto faults = load_faults((ctx.data / "dock_fault.txt").string());

  const SequenceResult clean = run_sequence(seq, ControlMode::kRlPolicy, &ckpt.policy, mc);
  const SequenceResult faulted = run_sequence(seq, ControlMode::kRlPolicy, &ckpt.policy, mc, faults);
  {
    std::ofstream os(ctx.artifacts / "replay_clean.txt");
    write_outcomes_list(os, clean);
    std::ofstream of(ctx.artifacts / "replay_faulted.txt");
    write_outcomes_list(of, faulted);
    write_trajectory_csv((ctx.artifacts / "replay_faulted.csv").string(), faulted.log);
  }

  auto pattern = [](const SequenceResult& r) {
    std::string s;
    for (const auto& rec : r.records) {
      switch (rec.outcome) {
        case ManeuverOutcome::kSuccess: s += 'S'; break;
        case ManeuverOutcome::kFallbackTriggered: s += 'F'; break;
        case ManeuverOutcome::kTimeout: s += 'T'; break;
        case ManeuverOutcome::kSkipped: s += '-'; break;
      }
    }
    return s;
  };

  // Time from the trip to the first tick with true speed under 0.01 m/s.
  double settle = std::numeric_limits<double>::infinity();
  if (faulted.records.size() >= 6 && faulted.records[5].fallback_time) {
    const double t_trip = *faulted.records[5].fallback_time;
    for (const LogRow& row : faulted.log.rows) {
      if (row.maneuver != 6 || row.t <= t_trip) continue;
      if (row.state.lin_vel.norm() < 0.01) {
        settle = row.t - t_trip;
        break;
      }
    }
  }
  const std::string pc = pattern(clean);
  const std::string pf = pattern(faulted);
  const bool ok = pc == "SSSSSSSS" && pf.size() == 8 && pf.substr(0, 5) == "SSSSS" && pf[5] == 'F' && settle <= 10.0 &&
                  pf[6] == 'S' && pf[7] == 'S';
  return {ok, fmt("no faults: %s (%d/8); with dock fault: %s, post-fallback speed < 0.01 m/s after %.2f s "
                  "(S success, F fallback, T timeout, - skipped)",
                  pc.c_str(), clean.successes(), pf.c_str(), settle)};
}

// ---- 9 ----------------------------------------------------------------------

Verdict criterion_determinism(const Context& ctx) {
  const fs::path dir = ctx.artifacts / "determinism";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "smoke.ini") << "[env]\nepisode_len = 300\n"
                                        "[ppo]\nn_envs = 8\nhorizon = 128\ntotal_env_steps = 20480\n"
                                        "minibatch_size = 256\neval_interval = 5\neval_episodes = 8\n"
                                        "[logging]\nprogress = false\n";
  }
  std::ostringstream sink;
  auto train_into = [&](const std::string& name) {
    cli::TrainArgs a;
    a.config_path = (dir / "smoke.ini").string();
    a.out_dir = (dir / name).string();
    a.workers = ctx.workers;
    cli::cmd_train(a, sink, sink);
    return slurp(dir / name / "curve.csv") + slurp(dir / name / "policy.ckpt") + slurp(dir / name / "final.ckpt");
  };
  const bool train_same = train_into("a") == train_into("b");

  const std::string ckpt = (dir / "a" / "policy.ckpt").string();
  auto eval_with = [&](int workers) {
    cli::EvalArgs e;
    e.ckpt_path = ckpt;
    e.episodes = 32;
    e.seed = 11;
    e.workers = workers;
    e.out_dir = (dir / ("eval" + std::to_string(workers))).string();
    std::ostringstream out, err;
    cli::cmd_eval(e, out, err);
    return out.str() + slurp(fs::path(e.out_dir) / "episodes.csv");
  };
  const std::string e1 = eval_with(1);
  const bool eval_repeat = e1 == eval_with(1);
  const bool eval_workers = e1 == eval_with(8);

  auto replay_once = [&](const std::string& name) {
    cli::ReplayArgs r;
    r.sequence_path = (ctx.data / "apiary_sequence.txt").string();
    r.faults_path = (ctx.data / "dock_fault.txt").string();
    r.ckpt_path = ckpt;
    r.out_dir = (dir / name).string();
    std::ostringstream out, err;
    cli::cmd_replay(r, out, err);
    return out.str() + slurp(fs::path(r.out_dir) / "trajectory.csv");
  };
  const bool replay_same = replay_once("replay_a") == replay_once("replay_b");
  return {train_same && eval_repeat && eval_workers && replay_same,
          fmt("train repeat %s; eval repeat %s; eval workers 1 vs 8 %s; replay repeat %s",
              train_same ? "identical" : "DIFFERENT", eval_repeat ? "identical" : "DIFFERENT",
              eval_workers ? "identical" : "DIFFERENT", replay_same ? "identical" : "DIFFERENT")};
}

// ---- 10 ---------------------------------------------------------------------

Verdict criterion_granite(const Context&) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> f(-0.4, 0.4), t(-0.1, 0.1);
  const BodyParams body{9.5, {0.15, 0.14, 0.16}, {0.01, -0.02, 0.005}};
  long long steps = 0;
  bool ok = true;
  for (int seq = 0; seq < 5; ++seq) {
    RigidState s;
    for (int i = 0; i < 10000; ++i, ++steps) {
      const Wrench w{{f(rng), f(rng), f(rng)}, {t(rng), t(rng), t(rng)}};
      s = step(s, w, body, DofMask::granite_3dof(), 0.016);
      ok = ok && s.position.z == 0.0 && s.lin_vel.z == 0.0 && s.attitude.x() == 0.0 && s.attitude.y() == 0.0 &&
           s.ang_vel.x == 0.0 && s.ang_vel.y == 0.0;
    }
  }
  return {ok, fmt("%lld random-wrench steps with a CoM offset; pz, vz, qx, qy, wx, wy all exactly zero: %s", steps,
                  ok ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  ctx.artifacts = fs::current_path() / "acceptance_artifacts";
  ctx.data = APIARY_DATA_DIR;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string n; std::getline(ss, n, ',');) only.insert(std::stoi(n));
    } else if (a == "--artifacts" && i + 1 < argc) {
      ctx.artifacts = argv[++i];
    } else if (a == "--data" && i + 1 < argc) {
      ctx.data = argv[++i];
    } else if (a == "--workers" && i + 1 < argc) {
      ctx.workers = std::stoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only N[,N...]] [--artifacts DIR] [--data DIR] [--workers N]\n";
      return 1;
    }
  }
  fs::create_directories(ctx.artifacts);

  const std::vector<std::pair<std::string, std::function<Verdict(const Context&)>>> criteria{
      {"dynamics oracle", criterion_dynamics},
      {"momentum conservation", criterion_conservation},
      {"gradient check", criterion_gradient},
      {"GAE equivalence", criterion_gae},
      {"baseline closed loop", criterion_baseline},
      {"training run", criterion_training},
      {"mass robustness", criterion_robustness},
      {"flight-sequence replay", criterion_replay},
      {"determinism", criterion_determinism},
      {"granite mode", criterion_granite},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Verdict v;
    try {
      v = criteria[i].second(ctx);
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << id << ". " << criteria[i].first << ": " << v.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
