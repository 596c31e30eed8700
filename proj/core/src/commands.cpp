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

#include "apiary/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "apiary/config.hpp"
#include "apiary/error.hpp"
#include "apiary/learn/checkpoint.hpp"
#include "apiary/learn/train.hpp"
#include "apiary/mission.hpp"
#include "apiary/parallel.hpp"

namespace apiary::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void make_dir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("output directory must not be empty");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create directory " + dir + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  auto os = open_out(path);
  os << text;
  if (!os) throw std::runtime_error("short write to " + path.string());
}

// Explicit file, else the configuration the checkpoint was trained under, else defaults.
RunConfig resolve_config(const std::string& config_path, const learn::Checkpoint& ckpt) {
  RunConfig cfg;
  if (!config_path.empty()) {
    cfg = load_run_config(config_path);
  } else if (!ckpt.meta.config_text.empty()) {
    cfg = parse_run_config_text(ckpt.meta.config_text, "checkpoint config");
  }
  cfg.env.obs_frame = ckpt.policy.frame;
  return cfg;
}

std::string summary_header() {
  return "scenario,episodes,success_rate,mean_return,mean_final_pos_err,mean_final_ori_err,mean_settle_time\n";
}

std::string summary_row(const std::string& scenario, const learn::EvalSummary& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%d,%.6f,%.10g,%.10g,%.10g,%.10g\n", scenario.c_str(), s.episodes,
                s.success_rate, s.mean_return, s.mean_final_pos_err, s.mean_final_ori_err, s.mean_settle_time);
  return buf;
}

}  // namespace

void cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg = args.config_path.empty() ? RunConfig{} : load_run_config(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  cfg.validate();
  if (cfg.ppo.total_env_steps < cfg.ppo.batch_size()) {
    throw ConfigError("insufficient steps: total_env_steps " + std::to_string(cfg.ppo.total_env_steps) +
                      " is below one batch of n_envs x horizon = " + std::to_string(cfg.ppo.batch_size()));
  }
  make_dir(args.out_dir);
  const fs::path dir(args.out_dir);
  const std::string snapshot = format_run_config(cfg);
  write_text(dir / "config.ini", snapshot);

  auto curve = open_out(dir / "curve.csv");
  learn::TrainOptions opt;
  opt.workers = resolve_workers(args.workers);
  opt.checkpoint_path = (dir / "policy.ckpt").string();
  if (cfg.logging.trainer_state) opt.trainer_state_path = (dir / "trainer_state.bin").string();
  opt.curve_csv = &curve;
  opt.progress = cfg.logging.progress ? &err : nullptr;
  opt.config_text = snapshot;

  learn::TrainResult res = learn::train(cfg.env, cfg.reward, cfg.ppo, cfg.seed, opt);

  learn::Checkpoint final_ckpt{res.final_policy, res.best.meta};
  final_ckpt.meta.set_scalar("env_steps", static_cast<double>(res.env_steps));
  learn::save_checkpoint((dir / "final.ckpt").string(), final_ckpt);

  const auto seeds = learn::seed_bank(learn::kHeldOutBankSalt, 100);
  const learn::EvalSummary held = learn::evaluate(res.best.policy, cfg.env, cfg.reward, seeds, opt.workers);
  write_text(dir / "heldout_summary.csv", summary_header() + summary_row("train_env", held));
  out << "trained " << res.updates << " updates, " << res.env_steps << " env steps\n";
  out << "held-out success rate " << held.success_rate << " over " << held.episodes << " episodes\n";
  out << "best checkpoint: " << opt.checkpoint_path << '\n';
}

void cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  if (args.episodes < 1) throw ConfigError("--episodes must be at least 1");
  const learn::Checkpoint ckpt = learn::load_checkpoint(args.ckpt_path);
  RunConfig cfg = resolve_config(args.config_path, ckpt);
  if (args.scenario == "iss6dof") {
    cfg.env.mask = DofMask::full_6dof();
  } else if (args.scenario == "granite3dof") {
    cfg.env.mask = DofMask::granite_3dof();
  } else {
    throw ConfigError("unknown scenario '" + args.scenario + "' (expected iss6dof or granite3dof)");
  }
  if (args.mass_scale) {
    if (!(*args.mass_scale > 0)) throw ConfigError("--mass-scale must be positive");
    cfg.env.mass_min = cfg.env.mass_max = *args.mass_scale;
  }
  cfg.validate();
  if (env_config_hash(cfg.env) != ckpt.meta.env_hash) {
    err << "warning: scenario differs from the environment the checkpoint was trained in\n";
  }
  const int workers = resolve_workers(args.workers);
  const auto seeds = learn::seed_bank(learn::kHeldOutBankSalt ^ args.seed, args.episodes);
  std::vector<TrajectoryLog> logs;
  const learn::EvalSummary s =
      learn::evaluate(ckpt.policy, cfg.env, cfg.reward, seeds, workers, args.logs_dir.empty() ? nullptr : &logs);

  if (!args.logs_dir.empty()) {
    make_dir(args.logs_dir);
    for (std::size_t i = 0; i < logs.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "episode_%04zu.csv", i);
      write_trajectory_csv((fs::path(args.logs_dir) / name).string(), logs[i]);
    }
  }
  if (!args.out_dir.empty()) {
    make_dir(args.out_dir);
    const fs::path dir(args.out_dir);
    write_text(dir / "summary.csv", summary_header() + summary_row(args.scenario, s));
    auto ep = open_out(dir / "episodes.csv");
    learn::write_eval_summary_csv(ep, s);
    write_text(dir / "config.ini", format_run_config(cfg));
  }
  out << summary_header() << summary_row(args.scenario, s);
}

void cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream&) {
  const learn::Checkpoint ckpt = learn::load_checkpoint(args.ckpt_path);
  const RunConfig cfg = resolve_config(args.config_path, ckpt);
  cfg.validate();
  const Maneuver m = parse_maneuver_spec(args.maneuver);
  const MissionConfig mc = cfg.mission();
  mc.validate();
  const RigidState docked{};
  ManeuverContext ctx;
  ctx.dock = {docked.position, docked.attitude};
  const ManeuverResult base = run_maneuver(docked, m, ControlMode::kBaseline, nullptr, mc, ctx);
  const ManeuverResult rl = run_maneuver(docked, m, ControlMode::kRlPolicy, &ckpt.policy, mc, ctx);
  const MetricReport rep = compare_metrics(rl.log, base.log);

  make_dir(args.out_dir);
  const fs::path dir(args.out_dir);
  write_trajectory_csv((dir / "baseline.csv").string(), base.log);
  write_trajectory_csv((dir / "rl.csv").string(), rl.log);
  {
    auto os = open_out(dir / "report.csv");
    write_metric_report_csv(os, rep);
  }
  {
    auto os = open_out(dir / "errors.dat");
    write_error_table(os, rl.log, base.log);
  }
  write_text(dir / "config.ini", format_run_config(cfg));

  char buf[256];
  out << describe(m) << '\n';
  std::snprintf(buf, sizeof buf, "baseline: %s, final |pos_err| %.4g m, |ori_err| %.4g deg, cross-axis %.3g m\n",
                std::string(to_string(base.outcome)).c_str(), rep.baseline.final_pos_norm,
                rep.baseline.final_ori_norm * 180 / std::numbers::pi, rep.baseline.max_cross_axis);
  out << buf;
  std::snprintf(buf, sizeof buf, "rl:       %s, final |pos_err| %.4g m, |ori_err| %.4g deg, cross-axis %.3g m\n",
                std::string(to_string(rl.outcome)).c_str(), rep.rl.final_pos_norm,
                rep.rl.final_ori_norm * 180 / std::numbers::pi, rep.rl.max_cross_axis);
  out << buf;
  out << "baseline ends with less error: " << (rep.baseline_less_final_error ? "yes" : "no") << '\n';
  out << "rl has more cross-axis excursion: " << (rep.rl_more_cross_axis ? "yes" : "no") << '\n';
}

void cmd_replay(const ReplayArgs& args, std::ostream& out, std::ostream&) {
  const std::vector<Maneuver> seq = load_sequence(args.sequence_path);
  const std::vector<LocalizationFault> faults =
      args.faults_path.empty() ? std::vector<LocalizationFault>{} : load_faults(args.faults_path);
  ControlMode controller;
  if (args.controller == "rl") {
    controller = ControlMode::kRlPolicy;
  } else if (args.controller == "baseline") {
    controller = ControlMode::kBaseline;
  } else {
    throw ConfigError("unknown controller '" + args.controller + "' (expected rl or baseline)");
  }
  std::optional<learn::Checkpoint> ckpt;
  RunConfig cfg;
  if (!args.ckpt_path.empty()) {
    ckpt = learn::load_checkpoint(args.ckpt_path);
    cfg = resolve_config(args.config_path, *ckpt);
  } else if (controller == ControlMode::kRlPolicy) {
    throw ConfigError("replay with the rl controller needs --ckpt");
  } else if (!args.config_path.empty()) {
    cfg = load_run_config(args.config_path);
  }
  cfg.validate();
  const SequenceResult res =
      run_sequence(seq, controller, ckpt ? &ckpt->policy : nullptr, cfg.mission(), faults, RigidState{});

  make_dir(args.out_dir);
  const fs::path dir(args.out_dir);
  {
    auto os = open_out(dir / "outcomes.csv");
    write_outcomes_csv(os, res);
  }
  {
    auto os = open_out(dir / "outcomes.txt");
    write_outcomes_list(os, res);
  }
  write_trajectory_csv((dir / "trajectory.csv").string(), res.log);
  write_text(dir / "config.ini", format_run_config(cfg));
  write_outcomes_list(out, res);
}

int run_guarded(const std::function<void()>& fn, std::ostream& err) {
  try {
    fn();
    return kExitOk;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace apiary::cli
