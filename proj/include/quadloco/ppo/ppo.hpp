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

#ifndef QUADLOCO_PPO_PPO_HPP_
#define QUADLOCO_PPO_PPO_HPP_

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "quadloco/nn/adam.hpp"
#include "quadloco/nn/policy.hpp"

namespace quadloco::ppo {

enum class KlMode { kEarlyStop, kAdaptiveLr };

struct PPOConfig {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_epsilon = 0.2;
  double kl_threshold = 0.008;
  KlMode kl_mode = KlMode::kEarlyStop;
  double lr_init = 3e-4;
  double lr_min = 1e-6;
  int total_epochs = 1500;  // length of the linear learning-rate decay
  int update_epochs = 5;
  int minibatches = 4;
  double value_coef = 0.5;
  double entropy_coef = 0.005;
  double max_grad_norm = 1.0;  // <= 0 disables clipping
  bool normalize_advantages = true;
  // Per-step rewards below this floor are raised to it before advantage
  // estimation; the buffer keeps the raw reward.
  double reward_floor = 0.0;

  void validate() const;
};

// max(lr_min, lr_init (1 - epoch / total_epochs)).
double lr_at(int epoch, const PPOConfig& config);

// Lateral side of a command: +1 left (v_cy > 0), -1 right, 0 neither.
inline std::int8_t command_side(double vy) {
  return vy > 0.0 ? 1 : (vy < 0.0 ? -1 : 0);
}

// Transitions of num_envs parallel trajectories of equal length, stored
// env-major: index = env * steps + t.
struct RolloutBuffer {
  int num_envs = 0;
  int steps = 0;
  Eigen::MatrixXd obs;      // obs_dim x N
  Eigen::MatrixXd actions;  // act_dim x N
  Eigen::VectorXd log_probs;
  Eigen::VectorXd rewards;
  Eigen::VectorXd values;
  // Value of the state reached by a time-limit truncation; 0 elsewhere.
  Eigen::VectorXd bootstrap;
  Eigen::VectorXd last_values;  // one per env, for the unfinished tail
  std::vector<std::uint8_t> dones;
  std::vector<std::int8_t> sides;
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;

  RolloutBuffer() = default;
  RolloutBuffer(int num_envs, int steps, int obs_dim, int act_dim);

  int size() const { return num_envs * steps; }
  int index(int env, int t) const { return env * steps + t; }
};

// Generalized advantage estimation over one trajectory segment:
//   delta_t = r_t + gamma V_{t+1} (1 - done_t) + gamma bootstrap_t - V_t
//   A_t = delta_t + gamma lambda (1 - done_t) A_{t+1}
// with V_T = last_value. Returns are A + V.
void gae_segment(std::span<const double> rewards, std::span<const double> values,
                 std::span<const std::uint8_t> dones,
                 std::span<const double> bootstrap, double last_value,
                 double gamma, double lambda, std::span<double> advantages,
                 std::span<double> returns);

// Fills buffer.advantages and buffer.returns from max(reward, reward_floor);
// optionally normalizes the advantages to zero mean and unit standard
// deviation afterwards.
void compute_gae(RolloutBuffer& buffer, double gamma, double lambda,
                 bool normalize = true,
                 double reward_floor = -std::numeric_limits<double>::infinity());

struct SymmetryCounts {
  std::int64_t left = 0;
  std::int64_t right = 0;
  double ratio = 0.0;            // left / right; +inf when right == 0
  bool right_is_zero = false;
};

SymmetryCounts symmetry_ratio(std::int64_t left, std::int64_t right);
SymmetryCounts symmetry_ratio(std::span<const std::int8_t> sides);

// Clipped surrogate min(rho A, clip(rho, 1 - eps, 1 + eps) A).
double clipped_surrogate(double ratio, double advantage, double epsilon);

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;     // mean(old_logp - new_logp) on the full batch
  double lr = 0.0;            // learning rate actually used
  int minibatch_steps = 0;    // optimizer steps taken
  bool early_stopped = false;
  bool aborted = false;       // non-finite loss, parameters rolled back
};

// Mutable optimizer state carried across epochs.
struct Optimizers {
  nn::AdamState policy;  // over [net parameters, log_std]
  nn::AdamState value;
  double lr_scale = 1.0;  // adaptive-lr mode multiplier
};

// Flat view of the trainable policy parameters.
Eigen::VectorXd policy_parameters(const nn::Policy& policy);
void set_policy_parameters(nn::Policy& policy, const Eigen::VectorXd& params);

// One PPO update on a buffer whose advantages and returns are filled.
UpdateStats update(nn::Policy& policy, nn::ValueFunction& value,
                   Optimizers& optimizers, const RolloutBuffer& buffer,
                   const PPOConfig& config, int epoch, std::mt19937_64& rng);

}  // namespace quadloco::ppo

#endif  // QUADLOCO_PPO_PPO_HPP_
