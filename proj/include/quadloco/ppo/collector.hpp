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

#ifndef QUADLOCO_PPO_COLLECTOR_HPP_
#define QUADLOCO_PPO_COLLECTOR_HPP_

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "quadloco/env/env.hpp"
#include "quadloco/nn/policy.hpp"
#include "quadloco/ppo/ppo.hpp"

namespace quadloco::ppo {

struct CollectStats {
  std::int64_t steps = 0;
  double mean_reward = 0.0;        // per step
  double mean_r_lv = 0.0;          // per step
  std::int64_t episodes = 0;       // finished during the collection
  std::int64_t falls = 0;
  std::int64_t diverged = 0;
  double mean_episode_len = 0.0;   // steps; falls back to running lengths
  double mean_episode_return = 0.0;
};

// Owns num_envs environments and their action-noise generators. Environments
// are processed in fixed groups of group_size whose network evaluations are
// batched, so results do not depend on the number of threads.
class Collector {
 public:
  Collector(const env::EnvConfig& config,
            std::shared_ptr<const sim::Terrain> terrain, int num_envs,
            std::uint64_t seed, int group_size = 8, int threads = 1);

  // Swaps the terrain of every environment and restarts all episodes.
  void set_terrain(std::shared_ptr<const sim::Terrain> terrain);

  // Runs `steps` control steps in every environment. Episodes that end are
  // reset immediately and continue in the same slot. With `deterministic`
  // the action is the policy mean.
  RolloutBuffer collect(const nn::Policy& policy, const nn::ValueFunction& value,
                        int steps, bool deterministic = false);

  const CollectStats& last_stats() const { return stats_; }
  int num_envs() const { return static_cast<int>(envs_.size()); }
  env::Env& env(int i) { return envs_[i]; }

 private:
  void run_group(int group, const nn::Policy& policy,
                 const nn::ValueFunction& value, int steps, bool deterministic,
                 RolloutBuffer& buffer, CollectStats& stats,
                 std::int64_t& finished_len, double& finished_return);

  std::vector<env::Env> envs_;
  std::vector<std::mt19937_64> action_rngs_;
  int group_size_;
  int threads_;
  CollectStats stats_;
};

// Deterministic evaluation: runs `episodes` full episodes (policy mean
// actions) on the given terrain and reports per-step tracking reward.
CollectStats evaluate(const nn::Policy& policy, const env::EnvConfig& config,
                      std::shared_ptr<const sim::Terrain> terrain, int episodes,
                      std::uint64_t seed);

}  // namespace quadloco::ppo

#endif  // QUADLOCO_PPO_COLLECTOR_HPP_
