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

#ifndef QUADLOCO_APP_RUN_CONFIG_HPP_
#define QUADLOCO_APP_RUN_CONFIG_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quadloco/mirror/mirror.hpp"
#include "quadloco/ppo/train.hpp"

namespace quadloco::app {

// Flat run configuration. Every key except `epochs` has a default; `epochs`
// is only required by the training commands.
struct RunConfig {
  // Run.
  std::string run_id = "run";
  std::string out_dir = "runs";
  std::uint64_t seed = 1;
  std::optional<int> epochs;
  int num_envs = 64;
  int batch_size = 8192;  // samples per epoch, a multiple of num_envs
  int threads = 1;
  int group_size = 8;
  bool resume = false;
  int checkpoint_every = 50;
  int eval_every = 0;
  int eval_episodes = 8;

  // Networks.
  std::vector<int> hidden_layers{512, 256, 128};
  double init_log_std = -1.3862943611198906;

  // PPO.
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_epsilon = 0.2;
  double kl_threshold = 0.008;
  std::string kl_mode = "early_stop";  // or adaptive_lr
  double lr_init = 3e-4;
  double lr_min = 1e-6;
  int lr_decay_epochs = 1500;
  int update_epochs = 5;
  int minibatches = 4;
  double value_coef = 0.5;
  double entropy_coef = 0.005;
  double max_grad_norm = 1.0;
  bool normalize_advantages = true;
  double reward_floor = 0.0;

  // Environment.
  double episode_length = 15.0;
  double spawn_height = 0.30;
  double spawn_radius = 0.0;
  double obs_noise = 0.0;
  double vx_max = 2.0;
  double vy_max = 2.0;
  double wz_max = 3.14;
  double kp = 20.0;
  double kd = 0.5;
  double tau_max = 33.5;
  double friction = 0.8;

  // Reward weights.
  double w_lv = 1.0;
  double w_az = 0.5;
  double w_lvp = 3.0;
  double w_azp = 0.05;
  double w_g = 1.0;
  double w_tau = 5e-4;
  double w_collide = 0.25;
  double w_ar = 0.1;

  // Terrain curriculum.
  bool curriculum = true;
  double curriculum_alpha = 0.05;
  double curriculum_threshold = 0.825;
  int curriculum_patience = 20;
  int initial_terrain = 0;  // 0 flat, 1 slopes, 2 steps
  std::uint64_t terrain_seed = 7;

  // Domain randomization.
  bool randomization = false;
  std::vector<double> friction_range{0.5, 1.25};
  std::vector<double> mass_range{0.9, 1.1};
  std::vector<double> kp_range{0.9, 1.1};
  std::vector<double> kd_range{0.9, 1.1};
  double push_max = 0.5;
  double push_interval = 5.0;

  // Tracking evaluation.
  double tracking_cap = 3.0;
  double tracking_settle = 1.0;
  double hold_time = 5.0;
  std::vector<double> angular_rates{0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5};
  double angular_timeout = 30.0;
  bool trajectory_dump = false;

  // Impact test and controller.
  int impact_tests = 30;
  double impact_push_interval = 2.0;
  double impact_vmax = 1.0;
  int impact_iterations = 8;
  double hysteresis_delta = 0.05;

  // Symmetry report.
  std::vector<std::uint64_t> symmetry_seeds{1, 2, 3, 4, 5};

  // Throws ConfigError on out-of-range values. Does not require `epochs`.
  void validate() const;
  // validate() plus the presence of `epochs`.
  void validate_for_training() const;

  std::string run_dir() const;
  env::EnvConfig env_config() const;
  ppo::TrainOptions train_options() const;
  mirror::ImpactTestConfig impact_config() const;

  // Every key in documentation order as key=value lines; parses back to an
  // equal configuration.
  std::string to_text() const;
};

struct ConfigKeyInfo {
  std::string name;
  std::string default_value;  // "" for a required key
  std::string doc;
};

const std::vector<ConfigKeyInfo>& config_keys();

// Throws ConfigError for an unknown key or a malformed value.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);
std::string get_config_value(const RunConfig& config, std::string_view key);

// Lines are key=value; blank lines and lines starting with '#' are skipped.
// Duplicate and unknown keys are rejected.
RunConfig parse_run_config(std::string_view text, std::string_view origin = "<string>");
RunConfig load_run_config(const std::string& path);

// Name of the environment variable that overrides `key`: QUADLOCO_ followed by
// the upper-cased key.
std::string env_override_name(std::string_view key);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// Applies every set override; `lookup` defaults to std::getenv.
void apply_env_overrides(RunConfig& config, const EnvLookup& lookup = {});

}  // namespace quadloco::app

#endif  // QUADLOCO_APP_RUN_CONFIG_HPP_
