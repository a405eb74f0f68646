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

#ifndef QUADLOCO_PPO_TRAIN_HPP_
#define QUADLOCO_PPO_TRAIN_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "quadloco/env/curriculum.hpp"
#include "quadloco/env/env.hpp"
#include "quadloco/nn/policy.hpp"
#include "quadloco/ppo/ppo.hpp"
#include "quadloco/sim/terrain.hpp"

namespace quadloco::ppo {

struct TrainOptions {
  env::EnvConfig env;
  sim::TerrainParams terrain;
  std::uint64_t terrain_seed = 7;
  PPOConfig ppo;
  env::CurriculumConfig curriculum;
  int initial_terrain = 0;

  int epochs = 1;
  int num_envs = 64;
  int steps_per_env = 128;
  int group_size = 8;
  int threads = 1;
  std::vector<int> hidden_layers{512, 256, 128};
  double init_log_std = -1.3862943611198906;  // log(0.25)
  std::uint64_t seed = 1;

  std::string run_dir;        // checkpoints and telemetry go here
  int checkpoint_every = 50;  // the final epoch is always checkpointed
  int eval_every = 0;         // 0 disables eval.csv
  int eval_episodes = 8;
  bool resume = false;

  nlohmann::json config_echo;  // embedded verbatim in every checkpoint

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  std::int64_t steps = 0;  // cumulative environment steps
  double mean_reward = 0.0;
  double mean_episode_len = 0.0;
  int terrain_index = 0;
  std::int64_t left_count = 0;
  std::int64_t right_count = 0;
  double ratio = 0.0;
  double approx_kl = 0.0;
  double lr = 0.0;
};

inline constexpr const char* kTelemetryHeader =
    "epoch,steps,mean_reward,mean_episode_len,terrain_index,left_count,"
    "right_count,ratio,approx_kl,lr";
inline constexpr const char* kEvalHeader =
    "epoch,mean_r_lv,mean_reward,mean_episode_len,falls";

std::string telemetry_row(const EpochRecord& r);

// Name of the checkpoint written after `epochs_done` epochs.
std::string checkpoint_name(int epochs_done);

struct TrainResult {
  std::vector<EpochRecord> records;  // epochs run by this call
  std::string last_checkpoint;
  nn::Policy policy;
  int start_epoch = 0;
};

using EpochCallback = std::function<void(const EpochRecord&, const UpdateStats&)>;

// collect -> GAE -> update -> curriculum -> telemetry, once per epoch.
// Appends to run_dir/telemetry.csv and writes run_dir/epoch_NNNNNN.ckpt.
// With resume, continues from the newest checkpoint in run_dir. On error the
// exception propagates and earlier checkpoints are left untouched.
TrainResult train(const TrainOptions& options, const EpochCallback& on_epoch = {});

// Newest checkpoint file in run_dir, or an empty string.
std::string latest_checkpoint(const std::string& run_dir);

// Fresh networks for the given options.
nn::Policy make_policy(const TrainOptions& options, std::mt19937_64& rng);
nn::ValueFunction make_value_function(const TrainOptions& options,
                                      std::mt19937_64& rng);

}  // namespace quadloco::ppo

#endif  // QUADLOCO_PPO_TRAIN_HPP_
