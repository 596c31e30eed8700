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

#include "apiary/learn/train.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "apiary/error.hpp"
#include "apiary/parallel.hpp"

namespace apiary::learn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

EpisodeOutcome run_episode(const ActorCritic& policy, const EnvConfig& config, const RewardWeights& weights,
                           std::uint64_t seed, TrajectoryLog* log) {
  Episode ep = start_episode(config, seed);
  if (log) {
    log->rows.clear();
    log->start = ep.state;
    log->goal_position = ep.goal.position;
    log->goal_attitude = ep.goal.attitude;
    log->rows.reserve(std::size_t(config.episode_len));
  }
  EpisodeOutcome out;
  out.seed = seed;
  for (;;) {
    const auto action = policy_action(policy, ep.obs);
    StepResult r = env_step(ep, std::span<const double, kActionDim>(action), config, weights);
    out.episode_return += r.reward;
    ep = std::move(r.next);
    if (log) {
      LogRow row;
      row.t = ep.steps * config.dt;
      row.state = ep.state;
      row.applied = r.info.applied;
      row.commanded = r.info.commanded;
      const PoseError err = logged_pose_error(ep.state, ep.goal.position, ep.goal.attitude);
      row.pos_err = err.position;
      row.ori_err = err.orientation;
      row.mode = ControlMode::kRlPolicy;
      log->rows.push_back(row);
    }
    if (r.done) {
      out.success = r.info.success;
      out.out_of_bounds = r.info.out_of_bounds;
      break;
    }
  }
  out.length = ep.steps;
  out.final_pos_err = ep.obs.pos_err.norm();
  out.final_ori_err = ep.obs.ori_err.norm();
  out.settle_time = out.success ? (out.length - config.hold_steps + 1) * config.dt : kNaN;
  return out;
}

bool better(const EvalSummary& a, const EvalSummary& b) {
  if (a.success_rate != b.success_rate) return a.success_rate > b.success_rate;
  return a.mean_return > b.mean_return;
}

void fill_meta(CheckpointMeta& meta, const EnvConfig& env, const PpoConfig& ppo, std::uint64_t seed) {
  meta.env_hash = env_config_hash(env);
  meta.set_scalar("f_max", env.limits.f_max);
  meta.set_scalar("tau_max", env.limits.tau_max);
  meta.set_scalar("dt", env.dt);
  meta.set_scalar("gamma", ppo.gamma);
  meta.set_scalar("lam", ppo.lam);
  meta.set_scalar("clip_eps", ppo.clip_eps);
  meta.set_scalar("lr", ppo.lr);
  meta.set_scalar("epochs_per_update", ppo.epochs_per_update);
  meta.set_scalar("minibatch_size", ppo.minibatch_size);
  meta.set_scalar("n_envs", ppo.n_envs);
  meta.set_scalar("horizon", ppo.horizon);
  meta.set_scalar("total_env_steps", static_cast<double>(ppo.total_env_steps));
  meta.set_scalar("seed", static_cast<double>(seed));
}

}  // namespace

std::vector<std::uint64_t> seed_bank(std::uint64_t seed, int n) {
  if (n < 0) throw std::invalid_argument("seed_bank: negative count");
  std::mt19937_64 rng = derive_stream(seed, 0, 5);
  std::vector<std::uint64_t> out(static_cast<std::size_t>(n));
  for (auto& s : out) s = rng();
  return out;
}

EvalSummary evaluate(const ActorCritic& policy, const EnvConfig& config, const RewardWeights& weights,
                     const std::vector<std::uint64_t>& seeds, int workers, std::vector<TrajectoryLog>* logs) {
  config.validate();
  policy.validate();
  if (policy.frame != config.obs_frame) throw ConfigError("policy observation frame does not match the environment");
  EvalSummary s;
  s.episodes = static_cast<int>(seeds.size());
  s.outcomes.resize(seeds.size());
  if (logs) logs->assign(seeds.size(), TrajectoryLog{});
  parallel_for(seeds.size(), workers, [&](std::size_t i) {
    s.outcomes[i] = run_episode(policy, config, weights, seeds[i], logs ? &(*logs)[i] : nullptr);
  });
  if (seeds.empty()) return s;
  int successes = 0;
  double settle = 0.0;
  for (const auto& o : s.outcomes) {
    s.mean_return += o.episode_return;
    s.mean_final_pos_err += o.final_pos_err;
    s.mean_final_ori_err += o.final_ori_err;
    if (o.success) {
      ++successes;
      settle += o.settle_time;
    }
  }
  const double n = static_cast<double>(seeds.size());
  s.success_rate = successes / n;
  s.mean_return /= n;
  s.mean_final_pos_err /= n;
  s.mean_final_ori_err /= n;
  s.mean_settle_time = successes ? settle / successes : kNaN;
  return s;
}

void write_eval_summary_csv(std::ostream& os, const EvalSummary& summary) {
  os << "seed,success,out_of_bounds,return,length,final_pos_err,final_ori_err,settle_time\n";
  char buf[256];
  for (const auto& o : summary.outcomes) {
    std::snprintf(buf, sizeof buf, "%llu,%d,%d,%.10g,%d,%.10g,%.10g,%.10g\n",
                  static_cast<unsigned long long>(o.seed), o.success ? 1 : 0, o.out_of_bounds ? 1 : 0,
                  o.episode_return, o.length, o.final_pos_err, o.final_ori_err, o.settle_time);
    os << buf;
  }
}

void write_curve_header(std::ostream& os) {
  os << "env_steps,update,mean_return,success_rate,train_return,loss_total,loss_policy,loss_value,entropy,"
        "approx_kl,clip_fraction,lr\n";
}

void write_curve_row(std::ostream& os, const CurveRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%lld,%lld,%.10g,%.6g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.6g,%.6g\n", r.env_steps,
                r.update, r.mean_return, r.success_rate, r.train_return, r.loss.total, r.loss.policy, r.loss.value,
                r.loss.entropy, r.loss.approx_kl, r.loss.clip_fraction, r.lr);
  os << buf;
}

TrainResult train(const EnvConfig& env_config, const RewardWeights& weights, const PpoConfig& ppo,
                  std::uint64_t seed, const TrainOptions& options) {
  env_config.validate();
  weights.validate();
  ppo.validate();
  const long long batch = ppo.batch_size();
  if (ppo.total_env_steps < batch) {
    throw ConfigError("insufficient steps: total_env_steps " + std::to_string(ppo.total_env_steps) +
                      " is below one batch of n_envs x horizon = " + std::to_string(batch));
  }
  const long long total_updates = ppo.total_env_steps / batch;

  TrainResult result;
  ActorCritic policy = ActorCritic::create(ppo.hidden, ppo.init_log_std, derive_stream(seed, 0, 4)(),
                                           env_config.obs_frame);
  Adam adam(policy);
  VecEnv venv(env_config, weights, ppo.n_envs, seed);
  std::mt19937_64 shuffle_rng = derive_stream(seed, 0, 3);
  const auto eval_seeds = seed_bank(kEvalBankSalt, ppo.eval_episodes);
  RolloutBuffer buffer;
  EvalSummary best_eval;
  bool have_best = false;

  if (options.curve_csv) {
    write_curve_header(*options.curve_csv);
    options.curve_csv->flush();
  }

  double train_return_sum = 0.0;
  long long train_episodes = 0;
  UpdateStats acc_stats;
  int acc_updates = 0;

  for (long long u = 1; u <= total_updates; ++u) {
    const double lr = ppo.lr_anneal ? ppo.lr * (1.0 - double(u - 1) / double(total_updates)) : ppo.lr;
    venv.collect(policy, ppo.horizon, options.workers, buffer);
    compute_advantages(buffer, ppo.gamma, ppo.lam);
    UpdateStats stats;
    try {
      stats = ppo_update(policy, adam, buffer, ppo, shuffle_rng, lr);
    } catch (const NumericalError& e) {
      if (options.progress) {
        *options.progress << "numerical failure at update " << u << ": " << e.what()
                          << (have_best ? "; best checkpoint kept" : "") << '\n';
      }
      throw NumericalError("update " + std::to_string(u) + ": " + e.what());
    }
    result.env_steps += batch;
    result.updates = u;
    for (const auto& rec : venv.take_finished()) {
      train_return_sum += rec.episode_return;
      ++train_episodes;
    }
    acc_stats.loss.total += stats.loss.total;
    acc_stats.loss.policy += stats.loss.policy;
    acc_stats.loss.value += stats.loss.value;
    acc_stats.loss.entropy += stats.loss.entropy;
    acc_stats.loss.approx_kl += stats.loss.approx_kl;
    acc_stats.loss.clip_fraction += stats.loss.clip_fraction;
    ++acc_updates;

    if (u % ppo.eval_interval != 0 && u != total_updates) continue;

    const EvalSummary ev = evaluate(policy, env_config, weights, eval_seeds, options.workers);
    CurveRow row;
    row.env_steps = result.env_steps;
    row.update = u;
    row.mean_return = ev.mean_return;
    row.success_rate = ev.success_rate;
    row.train_return = train_episodes ? train_return_sum / double(train_episodes) : kNaN;
    const double k = 1.0 / acc_updates;
    row.loss = acc_stats.loss;
    row.loss.total *= k;
    row.loss.policy *= k;
    row.loss.value *= k;
    row.loss.entropy *= k;
    row.loss.approx_kl *= k;
    row.loss.clip_fraction *= k;
    row.lr = lr;
    result.curve.push_back(row);
    train_return_sum = 0.0;
    train_episodes = 0;
    acc_stats = {};
    acc_updates = 0;

    if (options.curve_csv) {
      write_curve_row(*options.curve_csv, row);
      options.curve_csv->flush();
    }
    if (options.progress) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "update %lld/%lld steps %lld eval_success %.3f eval_return %.2f kl %.4f\n", u,
                    total_updates, result.env_steps, ev.success_rate, ev.mean_return, row.loss.approx_kl);
      *options.progress << buf << std::flush;
    }

    if (!have_best || better(ev, best_eval)) {
      have_best = true;
      best_eval = ev;
      result.best.policy = policy;
      fill_meta(result.best.meta, env_config, ppo, seed);
      result.best.meta.config_text = options.config_text;
      result.best.meta.set_scalar("env_steps", static_cast<double>(result.env_steps));
      result.best.meta.set_scalar("eval_success_rate", ev.success_rate);
      result.best.meta.set_scalar("eval_mean_return", ev.mean_return);
      if (!options.checkpoint_path.empty()) save_checkpoint(options.checkpoint_path, result.best);
    }
    if (!options.trainer_state_path.empty()) {
      save_trainer_state(options.trainer_state_path,
                         {adam.steps(), adam.first_moment(), adam.second_moment(), u, result.env_steps});
    }
  }
  result.final_policy = std::move(policy);
  return result;
}

}  // namespace apiary::learn
