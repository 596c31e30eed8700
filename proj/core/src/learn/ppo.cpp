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

#include "apiary/learn/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "apiary/error.hpp"

namespace apiary::learn {

void PpoConfig::validate() const {
  if (!(gamma >= 0 && gamma <= 1) || !(lam >= 0 && lam <= 1)) throw ConfigError("ppo: gamma and lam must be in [0, 1]");
  if (!(clip_eps > 0)) throw ConfigError("ppo: clip_eps must be positive");
  if (!(lr > 0)) throw ConfigError("ppo: lr must be positive");
  if (epochs_per_update < 1 || minibatch_size < 1) throw ConfigError("ppo: epochs and minibatch_size must be >= 1");
  if (!(value_coef >= 0) || !(entropy_coef >= 0)) throw ConfigError("ppo: loss coefficients must be non-negative");
  if (!(max_grad_norm > 0)) throw ConfigError("ppo: max_grad_norm must be positive");
  if (n_envs < 1 || horizon < 1) throw ConfigError("ppo: n_envs and horizon must be >= 1");
  if (total_env_steps < 1) throw ConfigError("ppo: total_env_steps must be positive");
  if (hidden.empty()) throw ConfigError("ppo: at least one hidden layer is required");
  for (int h : hidden) {
    if (h < 1) throw ConfigError("ppo: hidden sizes must be positive");
  }
  if (!(init_log_std >= kLogStdMin && init_log_std <= kLogStdMax)) throw ConfigError("ppo: init_log_std out of [-5, 1]");
  if (eval_interval < 1 || eval_episodes < 1) throw ConfigError("ppo: eval_interval and eval_episodes must be >= 1");
}

void gae(std::span<const double> rewards, std::span<const double> values, std::span<const std::uint8_t> dones,
         double bootstrap, double gamma, double lam, std::span<double> advantages, std::span<double> returns) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n || advantages.size() != n || returns.size() != n) {
    throw std::invalid_argument("gae: length mismatch");
  }
  double next_adv = 0.0;
  double next_value = bootstrap;
  for (std::size_t i = n; i-- > 0;) {
    const double not_done = dones[i] ? 0.0 : 1.0;
    const double delta = rewards[i] + gamma * next_value * not_done - values[i];
    next_adv = delta + gamma * lam * not_done * next_adv;
    advantages[i] = next_adv;
    returns[i] = next_adv + values[i];
    next_value = values[i];
  }
}

void compute_advantages(RolloutBuffer& buffer, double gamma, double lam) {
  buffer.advantages.assign(buffer.size(), 0.0);
  buffer.returns.assign(buffer.size(), 0.0);
  const std::size_t h = buffer.horizon;
  for (int e = 0; e < buffer.n_envs; ++e) {
    const std::size_t off = buffer.index(e, 0);
    gae(std::span(buffer.rewards).subspan(off, h), std::span(buffer.values).subspan(off, h),
        std::span(buffer.dones).subspan(off, h), buffer.bootstrap[e], gamma, lam,
        std::span(buffer.advantages).subspan(off, h), std::span(buffer.returns).subspan(off, h));
  }
}

std::vector<double> normalize_advantages(std::span<const double> adv) {
  std::vector<double> out(adv.begin(), adv.end());
  if (out.empty()) return out;
  const double n = static_cast<double>(out.size());
  const double mean = std::accumulate(out.begin(), out.end(), 0.0) / n;
  double var = 0.0;
  for (double a : out) var += (a - mean) * (a - mean);
  const double sd = std::sqrt(var / n);
  for (double& a : out) a = sd > 0.0 ? (a - mean) / sd : 0.0;
  return out;
}

ParamGrad ParamGrad::zeros_like(const ActorCritic& policy) {
  ParamGrad g;
  g.actor.assign(policy.actor.data.size(), 0.0);
  g.log_std.assign(policy.log_std.size(), 0.0);
  g.critic.assign(policy.critic.data.size(), 0.0);
  return g;
}

void ParamGrad::set_zero() {
  std::fill(actor.begin(), actor.end(), 0.0);
  std::fill(log_std.begin(), log_std.end(), 0.0);
  std::fill(critic.begin(), critic.end(), 0.0);
}

double ParamGrad::global_norm() const {
  double s = 0.0;
  for (double v : actor) s += v * v;
  for (double v : log_std) s += v * v;
  for (double v : critic) s += v * v;
  return std::sqrt(s);
}

void ParamGrad::scale(double k) {
  for (double& v : actor) v *= k;
  for (double& v : log_std) v *= k;
  for (double& v : critic) v *= k;
}

bool ParamGrad::is_finite() const {
  auto ok = [](const std::vector<double>& xs) {
    return std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v); });
  };
  return ok(actor) && ok(log_std) && ok(critic);
}

namespace {

LossTerms evaluate_loss(const ActorCritic& policy, const RolloutBuffer& buffer, std::span<const std::size_t> indices,
                        std::span<const double> advantages, const PpoConfig& config, ParamGrad* grad) {
  if (indices.size() != advantages.size() || indices.empty()) {
    throw std::invalid_argument("ppo loss: indices/advantages mismatch or empty minibatch");
  }
  const double inv_n = 1.0 / static_cast<double>(indices.size());
  if (grad != nullptr) {
    if (grad->actor.size() != policy.actor.data.size()) *grad = ParamGrad::zeros_like(policy);
    grad->set_zero();
  }

  thread_local MlpWorkspace actor_ws;
  thread_local MlpWorkspace critic_ws;
  std::array<double, kActionDim> inv_var{};
  for (int j = 0; j < kActionDim; ++j) inv_var[j] = std::exp(-2.0 * policy.log_std[j]);

  LossTerms out;
  std::array<double, kActionDim> d_mean{};
  for (std::size_t s = 0; s < indices.size(); ++s) {
    const std::size_t k = indices[s];
    const std::span<const double> x(buffer.obs.data() + k * kObsDim, kObsDim);
    const std::span<const double> a(buffer.actions.data() + k * kActionDim, kActionDim);
    const double adv = advantages[s];

    const auto mean = mlp_forward(policy.actor, x, actor_ws);
    const double value = mlp_forward(policy.critic, x, critic_ws)[0];

    const double logp = gaussian_log_prob(mean, policy.log_std, a);
    const double log_ratio = logp - buffer.log_probs[k];
    const double ratio = std::exp(log_ratio);
    const double unclipped = ratio * adv;
    const double clipped = std::clamp(ratio, 1.0 - config.clip_eps, 1.0 + config.clip_eps) * adv;
    const bool use_unclipped = unclipped <= clipped;
    out.policy -= std::min(unclipped, clipped) * inv_n;
    out.approx_kl += ((ratio - 1.0) - log_ratio) * inv_n;
    if (std::abs(ratio - 1.0) > config.clip_eps) out.clip_fraction += inv_n;
    const double verr = value - buffer.returns[k];
    out.value += verr * verr * inv_n;

    if (grad == nullptr) continue;
    // d(-min(...))/d logp; zero on the clipped branch.
    const double d_logp = use_unclipped ? -unclipped * inv_n : 0.0;
    for (int j = 0; j < kActionDim; ++j) {
      const double diff = a[j] - mean[j];
      d_mean[j] = d_logp * diff * inv_var[j];
      grad->log_std[j] += d_logp * (diff * diff * inv_var[j] - 1.0);
    }
    mlp_backward(policy.actor, actor_ws, d_mean, grad->actor);
    const double d_value = 2.0 * config.value_coef * verr * inv_n;
    mlp_backward(policy.critic, critic_ws, std::span<const double>(&d_value, 1), grad->critic);
  }
  out.entropy = gaussian_entropy(policy.log_std);
  out.total = out.policy + config.value_coef * out.value - config.entropy_coef * out.entropy;
  if (grad != nullptr) {
    for (double& g : grad->log_std) g -= config.entropy_coef;
  }
  return out;
}

}  // namespace

LossTerms ppo_loss_and_grad(const ActorCritic& policy, const RolloutBuffer& buffer,
                            std::span<const std::size_t> indices, std::span<const double> advantages,
                            const PpoConfig& config, ParamGrad& grad) {
  return evaluate_loss(policy, buffer, indices, advantages, config, &grad);
}

LossTerms ppo_loss(const ActorCritic& policy, const RolloutBuffer& buffer, std::span<const std::size_t> indices,
                   std::span<const double> advantages, const PpoConfig& config) {
  return evaluate_loss(policy, buffer, indices, advantages, config, nullptr);
}

Adam::Adam(const ActorCritic& policy, double beta1, double beta2, double eps)
    : beta1_(beta1), beta2_(beta2), eps_(eps), m_(ParamGrad::zeros_like(policy)), v_(ParamGrad::zeros_like(policy)) {}

void Adam::restore(long long t, ParamGrad m, ParamGrad v) {
  t_ = t;
  m_ = std::move(m);
  v_ = std::move(v);
}

void Adam::step(ActorCritic& policy, const ParamGrad& grad, double lr) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto apply = [&](std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
                   std::vector<double>& v) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
      p[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
    }
  };
  apply(policy.actor.data, grad.actor, m_.actor, v_.actor);
  apply(policy.log_std, grad.log_std, m_.log_std, v_.log_std);
  apply(policy.critic.data, grad.critic, m_.critic, v_.critic);
  policy.clamp_log_std();
}

UpdateStats ppo_update(ActorCritic& policy, Adam& optimizer, const RolloutBuffer& buffer, const PpoConfig& config,
                       std::mt19937_64& shuffle_rng, double lr) {
  const std::size_t n = buffer.size();
  if (n == 0 || buffer.advantages.size() != n || buffer.returns.size() != n) {
    throw std::invalid_argument("ppo_update: buffer is empty or advantages were not computed");
  }
  const std::size_t mb = std::min<std::size_t>(config.minibatch_size, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  UpdateStats stats;
  ParamGrad grad = ParamGrad::zeros_like(policy);
  std::vector<double> raw_adv;
  int minibatch = 0;
  for (int epoch = 0; epoch < config.epochs_per_update; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t start = 0; start < n; start += mb, ++minibatch) {
      const std::size_t end = std::min(n, start + mb);
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      raw_adv.resize(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) raw_adv[i] = buffer.advantages[idx[i]];
      const std::vector<double> adv = normalize_advantages(raw_adv);

      const LossTerms loss = ppo_loss_and_grad(policy, buffer, idx, adv, config, grad);
      if (!std::isfinite(loss.total) || !grad.is_finite()) {
        throw NumericalError("ppo_update: non-finite loss or gradient in minibatch " + std::to_string(minibatch));
      }
      const double norm = grad.global_norm();
      if (norm > config.max_grad_norm) grad.scale(config.max_grad_norm / norm);
      optimizer.step(policy, grad, lr);

      stats.loss.total += loss.total;
      stats.loss.policy += loss.policy;
      stats.loss.value += loss.value;
      stats.loss.entropy += loss.entropy;
      stats.loss.approx_kl += loss.approx_kl;
      stats.loss.clip_fraction += loss.clip_fraction;
      stats.grad_norm += norm;
      ++stats.minibatches;
    }
  }
  const double k = 1.0 / stats.minibatches;
  stats.loss.total *= k;
  stats.loss.policy *= k;
  stats.loss.value *= k;
  stats.loss.entropy *= k;
  stats.loss.approx_kl *= k;
  stats.loss.clip_fraction *= k;
  stats.grad_norm *= k;
  return stats;
}

}  // namespace apiary::learn
