// Copyright 2026 The Quadloco Authors.
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

#include "quadloco/ppo/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "quadloco/error.hpp"

namespace quadloco::ppo {

void PPOConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("ppo: gamma must be in (0, 1)");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) {
    throw ConfigError("ppo: gae_lambda must be in [0, 1]");
  }
  if (!(clip_epsilon > 0.0)) throw ConfigError("ppo: clip_epsilon must be > 0");
  if (!(kl_threshold > 0.0)) throw ConfigError("ppo: kl_threshold must be > 0");
  if (!(lr_min > 0.0) || !(lr_min <= lr_init)) {
    throw ConfigError("ppo: need 0 < lr_min <= lr_init");
  }
  if (total_epochs < 1) throw ConfigError("ppo: total_epochs must be >= 1");
  if (update_epochs < 1 || minibatches < 1) {
    throw ConfigError("ppo: update_epochs and minibatches must be >= 1");
  }
  if (!(value_coef >= 0.0) || !(entropy_coef >= 0.0)) {
    throw ConfigError("ppo: loss coefficients must be >= 0");
  }
}

double lr_at(int epoch, const PPOConfig& config) {
  const double frac = 1.0 - static_cast<double>(epoch) / config.total_epochs;
  return std::max(config.lr_min, config.lr_init * frac);
}

RolloutBuffer::RolloutBuffer(int num_envs_, int steps_, int obs_dim, int act_dim)
    : num_envs(num_envs_), steps(steps_) {
  const int n = num_envs * steps;
  obs.setZero(obs_dim, n);
  actions.setZero(act_dim, n);
  log_probs.setZero(n);
  rewards.setZero(n);
  values.setZero(n);
  bootstrap.setZero(n);
  last_values.setZero(num_envs);
  dones.assign(n, 0);
  sides.assign(n, 0);
  advantages.setZero(n);
  returns.setZero(n);
}

void gae_segment(std::span<const double> rewards, std::span<const double> values,
                 std::span<const std::uint8_t> dones,
                 std::span<const double> bootstrap, double last_value,
                 double gamma, double lambda, std::span<double> advantages,
                 std::span<double> returns) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n || bootstrap.size() != n ||
      advantages.size() != n || returns.size() != n) {
    throw ShapeError("gae: segment arrays differ in length");
  }
  double next_adv = 0.0;
  double next_value = last_value;
  for (std::size_t k = n; k-- > 0;) {
    const double live = dones[k] ? 0.0 : 1.0;
    const double delta =
        rewards[k] + gamma * next_value * live + gamma * bootstrap[k] - values[k];
    next_adv = delta + gamma * lambda * live * next_adv;
    advantages[k] = next_adv;
    returns[k] = next_adv + values[k];
    next_value = values[k];
  }
}

void compute_gae(RolloutBuffer& b, double gamma, double lambda, bool normalize,
                 double reward_floor) {
  const Eigen::VectorXd rewards = b.rewards.cwiseMax(reward_floor);
  const auto seg = [&](auto& v, int e) {
    return std::span(v.data() + b.index(e, 0), static_cast<std::size_t>(b.steps));
  };
  for (int e = 0; e < b.num_envs; ++e) {
    gae_segment(seg(rewards, e), seg(b.values, e), seg(b.dones, e),
                seg(b.bootstrap, e), b.last_values[e], gamma, lambda,
                seg(b.advantages, e), seg(b.returns, e));
  }
  if (!b.advantages.allFinite()) throw NumericError("gae: non-finite advantage");
  if (normalize && b.size() > 1) {
    const double mean = b.advantages.mean();
    const double var = (b.advantages.array() - mean).square().mean();
    b.advantages = (b.advantages.array() - mean) / (std::sqrt(var) + 1e-8);
  }
}

SymmetryCounts symmetry_ratio(std::int64_t left, std::int64_t right) {
  SymmetryCounts c;
  c.left = left;
  c.right = right;
  c.right_is_zero = right == 0;
  c.ratio = right == 0 ? std::numeric_limits<double>::infinity()
                       : static_cast<double>(left) / static_cast<double>(right);
  return c;
}

SymmetryCounts symmetry_ratio(std::span<const std::int8_t> sides) {
  std::int64_t left = 0;
  std::int64_t right = 0;
  for (std::int8_t s : sides) {
    left += s > 0;
    right += s < 0;
  }
  return symmetry_ratio(left, right);
}

double clipped_surrogate(double ratio, double advantage, double epsilon) {
  const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

Eigen::VectorXd policy_parameters(const nn::Policy& policy) {
  const Eigen::Index n = policy.net.num_parameters();
  Eigen::VectorXd p(n + policy.head.dim());
  p.head(n) = policy.net.parameters();
  p.tail(policy.head.dim()) = policy.head.log_std();
  return p;
}

void set_policy_parameters(nn::Policy& policy, const Eigen::VectorXd& params) {
  const Eigen::Index n = policy.net.num_parameters();
  if (params.size() != n + policy.head.dim()) {
    throw ShapeError("policy parameter vector has the wrong size");
  }
  policy.net.parameters() = params.head(n);
  policy.head.log_std() = params.tail(policy.head.dim());
  policy.head.clamp();
}

namespace {

void clip_norm(Eigen::VectorXd& g, double max_norm) {
  if (!(max_norm > 0.0)) return;
  const double norm = g.norm();
  if (norm > max_norm) g *= max_norm / norm;
}

Eigen::VectorXd log_probs_of(const nn::Policy& policy, const Eigen::MatrixXd& obs,
                             const Eigen::MatrixXd& actions) {
  const Eigen::MatrixXd mean = policy.mean_batch(obs);
  Eigen::VectorXd lp(obs.cols());
  for (Eigen::Index k = 0; k < obs.cols(); ++k) {
    lp[k] = policy.head.log_prob(mean.col(k), actions.col(k));
  }
  return lp;
}

}  // namespace

UpdateStats update(nn::Policy& policy, nn::ValueFunction& value,
                   Optimizers& opt, const RolloutBuffer& buffer,
                   const PPOConfig& config, int epoch, std::mt19937_64& rng) {
  const int n = buffer.size();
  if (n == 0) throw ContractError("ppo: empty rollout buffer");
  const Eigen::Index act_dim = policy.head.dim();

  const Eigen::VectorXd policy_backup = policy_parameters(policy);
  const Eigen::VectorXd value_backup = value.net.parameters();
  const Optimizers opt_backup = opt;

  UpdateStats stats;
  stats.lr = std::max(config.lr_min, lr_at(epoch, config) * opt.lr_scale);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const int mb_size = std::max(1, n / config.minibatches);

  Eigen::VectorXd policy_params = policy_backup;
  Eigen::VectorXd value_params = value_backup;
  double loss_sum = 0.0;
  double value_loss_sum = 0.0;

  for (int pass = 0; pass < config.update_epochs && !stats.early_stopped; ++pass) {
    std::shuffle(order.begin(), order.end(), rng);
    for (int m = 0; m < config.minibatches; ++m) {
      const int begin = m * mb_size;
      const int end = m + 1 == config.minibatches ? n : begin + mb_size;
      const int b = end - begin;
      if (b <= 0) continue;

      Eigen::MatrixXd obs(buffer.obs.rows(), b);
      Eigen::MatrixXd act(act_dim, b);
      Eigen::VectorXd old_lp(b), adv(b), ret(b);
      for (int k = 0; k < b; ++k) {
        const int i = order[begin + k];
        obs.col(k) = buffer.obs.col(i);
        act.col(k) = buffer.actions.col(i);
        old_lp[k] = buffer.log_probs[i];
        adv[k] = buffer.advantages[i];
        ret[k] = buffer.returns[i];
      }

      // Policy.
      nn::DenseNet::Tape tape;
      const Eigen::MatrixXd mean = policy.net.forward_batch(policy.scaled_batch(obs), tape);
      Eigen::MatrixXd d_mean(act_dim, b);
      Eigen::VectorXd d_log_std = Eigen::VectorXd::Zero(act_dim);
      Eigen::VectorXd dm(act_dim), dls(act_dim);
      double kl = 0.0;
      double surrogate = 0.0;
      for (int k = 0; k < b; ++k) {
        const double lp = policy.head.log_prob(mean.col(k), act.col(k));
        kl += old_lp[k] - lp;
        const double ratio = std::exp(lp - old_lp[k]);
        surrogate += clipped_surrogate(ratio, adv[k], config.clip_epsilon);
        const bool active = adv[k] >= 0.0 ? ratio < 1.0 + config.clip_epsilon
                                          : ratio > 1.0 - config.clip_epsilon;
        // d(-mean surrogate)/d(log prob).
        const double coef = active ? -ratio * adv[k] / b : 0.0;
        policy.head.log_prob_gradients(mean.col(k), act.col(k), dm, dls);
        d_mean.col(k) = coef * dm;
        d_log_std += coef * dls;
      }
      kl /= b;
      if (kl > config.kl_threshold && config.kl_mode == KlMode::kEarlyStop) {
        stats.early_stopped = true;
        break;
      }
      const double entropy = policy.head.entropy();
      const double policy_loss = -surrogate / b - config.entropy_coef * entropy;
      d_log_std.array() -= config.entropy_coef;

      // Value function.
      nn::DenseNet::Tape vtape;
      const Eigen::MatrixXd v = value.net.forward_batch(value.scaled_batch(obs), vtape);
      const Eigen::RowVectorXd err = v.row(0) - ret.transpose();
      const double value_loss = config.value_coef * err.squaredNorm() / b;

      if (!std::isfinite(policy_loss) || !std::isfinite(value_loss)) {
        set_policy_parameters(policy, policy_backup);
        value.net.parameters() = value_backup;
        opt = opt_backup;
        stats.aborted = true;
        return stats;
      }

      Eigen::VectorXd g(policy_params.size());
      g.head(policy.net.num_parameters()) = policy.net.backward(tape, d_mean).params;
      g.tail(act_dim) = d_log_std;
      clip_norm(g, config.max_grad_norm);
      nn::adam_step(policy_params, g, opt.policy, stats.lr);
      set_policy_parameters(policy, policy_params);
      policy_params = policy_parameters(policy);  // log_std may have been clamped

      const Eigen::MatrixXd dv = (2.0 * config.value_coef / b) * err;
      Eigen::VectorXd gv = value.net.backward(vtape, dv).params;
      clip_norm(gv, config.max_grad_norm);
      nn::adam_step(value_params, gv, opt.value, stats.lr);
      value.net.parameters() = value_params;

      loss_sum += policy_loss;
      value_loss_sum += value_loss;
      stats.entropy = entropy;
      ++stats.minibatch_steps;
    }

    if (config.kl_mode == KlMode::kAdaptiveLr) {
      const double kl = (buffer.log_probs - log_probs_of(policy, buffer.obs, buffer.actions)).mean();
      if (kl > 2.0 * config.kl_threshold) {
        opt.lr_scale = std::max(opt.lr_scale / 1.5, config.lr_min / config.lr_init);
      } else if (kl < 0.5 * config.kl_threshold) {
        opt.lr_scale = std::min(opt.lr_scale * 1.5, 10.0);
      }
      stats.lr = std::max(config.lr_min, lr_at(epoch, config) * opt.lr_scale);
    }
  }

  if (stats.minibatch_steps > 0) {
    stats.policy_loss = loss_sum / stats.minibatch_steps;
    stats.value_loss = value_loss_sum / stats.minibatch_steps;
  }
  stats.entropy = policy.head.entropy();
  stats.approx_kl =
      (buffer.log_probs - log_probs_of(policy, buffer.obs, buffer.actions)).mean();
  return stats;
}

}  // namespace quadloco::ppo
