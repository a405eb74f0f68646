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

#include "quadloco/ppo/collector.hpp"

#include <algorithm>
#include <thread>

#include "quadloco/error.hpp"

namespace quadloco::ppo {

namespace {

std::mt19937_64 derived_rng(std::uint64_t seed, int index, int stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

}  // namespace

Collector::Collector(const env::EnvConfig& config,
                     std::shared_ptr<const sim::Terrain> terrain, int num_envs,
                     std::uint64_t seed, int group_size, int threads)
    : group_size_(group_size), threads_(std::max(1, threads)) {
  if (num_envs < 1 || group_size < 1) {
    throw ConfigError("collector: num_envs and group_size must be >= 1");
  }
  envs_.reserve(num_envs);
  for (int i = 0; i < num_envs; ++i) {
    envs_.emplace_back(config, terrain, derived_rng(seed, i, 0)());
    action_rngs_.push_back(derived_rng(seed, i, 1));
    envs_.back().reset();
  }
}

void Collector::set_terrain(std::shared_ptr<const sim::Terrain> terrain) {
  for (auto& e : envs_) {
    e.set_terrain(terrain);
    e.reset();
  }
}

void Collector::run_group(int group, const nn::Policy& policy,
                          const nn::ValueFunction& value, int steps,
                          bool deterministic, RolloutBuffer& buf,
                          CollectStats& stats, std::int64_t& finished_len,
                          double& finished_return) {
  const int first = group * group_size_;
  const int last = std::min(first + group_size_, num_envs());
  const int g = last - first;
  Eigen::MatrixXd obs(env::kObsDim, g);
  for (int t = 0; t < steps; ++t) {
    for (int j = 0; j < g; ++j) obs.col(j) = envs_[first + j].observation();
    const Eigen::MatrixXd mean = policy.mean_batch(obs);
    const Eigen::VectorXd values = value.value_batch(obs);
    for (int j = 0; j < g; ++j) {
      const int e = first + j;
      env::Env& env = envs_[e];
      const int i = buf.index(e, t);
      const sim::JointVector action =
          deterministic ? sim::JointVector(mean.col(j))
                        : sim::JointVector(policy.head.sample(mean.col(j), action_rngs_[e]));
      buf.obs.col(i) = obs.col(j);
      buf.actions.col(i) = action;
      buf.log_probs[i] = policy.head.log_prob(mean.col(j), action);
      buf.values[i] = values[j];
      buf.sides[i] = command_side(env.command().vy);
      const env::StepResult r = env.step(action);
      buf.rewards[i] = r.reward;
      stats.mean_reward += r.reward;
      stats.mean_r_lv += r.info.terms.lv;
      ++stats.steps;
      if (r.done) {
        buf.dones[i] = 1;
        if (r.info.outcome == env::ResetOutcome::kTimeout) {
          buf.bootstrap[i] = value.value(r.obs);
        }
        ++stats.episodes;
        stats.falls += r.info.outcome == env::ResetOutcome::kFell;
        stats.diverged += r.info.diverged;
        finished_len += r.info.episode_steps;
        finished_return += r.info.episode_return;
        env.reset();
      }
    }
  }
  for (int j = 0; j < g; ++j) obs.col(j) = envs_[first + j].observation();
  const Eigen::VectorXd tail = value.value_batch(obs);
  for (int j = 0; j < g; ++j) buf.last_values[first + j] = tail[j];
}

RolloutBuffer Collector::collect(const nn::Policy& policy,
                                 const nn::ValueFunction& value, int steps,
                                 bool deterministic) {
  if (steps < 1) throw ConfigError("collector: steps must be >= 1");
  RolloutBuffer buf(num_envs(), steps, env::kObsDim, env::kActionDim);
  const int groups = (num_envs() + group_size_ - 1) / group_size_;
  std::vector<CollectStats> group_stats(groups);
  std::vector<std::int64_t> group_len(groups, 0);
  std::vector<double> group_return(groups, 0.0);
  auto work = [&](int worker) {
    for (int grp = worker; grp < groups; grp += threads_) {
      run_group(grp, policy, value, steps, deterministic, buf, group_stats[grp],
                group_len[grp], group_return[grp]);
    }
  };
  const int workers = std::min(threads_, groups);
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  CollectStats s;
  std::int64_t finished_len = 0;
  double finished_return = 0.0;
  for (int grp = 0; grp < groups; ++grp) {
    s.steps += group_stats[grp].steps;
    s.mean_reward += group_stats[grp].mean_reward;
    s.mean_r_lv += group_stats[grp].mean_r_lv;
    s.episodes += group_stats[grp].episodes;
    s.falls += group_stats[grp].falls;
    s.diverged += group_stats[grp].diverged;
    finished_len += group_len[grp];
    finished_return += group_return[grp];
  }
  s.mean_reward /= s.steps;
  s.mean_r_lv /= s.steps;
  if (s.episodes > 0) {
    s.mean_episode_len = static_cast<double>(finished_len) / s.episodes;
    s.mean_episode_return = finished_return / s.episodes;
  } else {
    double running = 0.0;
    for (const auto& e : envs_) running += e.episode_steps();
    s.mean_episode_len = running / num_envs();
  }
  stats_ = s;
  return buf;
}

CollectStats evaluate(const nn::Policy& policy, const env::EnvConfig& config,
                      std::shared_ptr<const sim::Terrain> terrain, int episodes,
                      std::uint64_t seed) {
  if (episodes < 1) throw ConfigError("evaluate: episodes must be >= 1");
  CollectStats s;
  double len = 0.0;
  double ret = 0.0;
  for (int ep = 0; ep < episodes; ++ep) {
    env::Env env(config, terrain, derived_rng(seed, ep, 2)());
    env.reset();
    env::StepResult r;
    do {
      r = env.step(sim::JointVector(policy.mean(env.observation())));
      s.mean_reward += r.reward;
      s.mean_r_lv += r.info.terms.lv;
      ++s.steps;
    } while (!r.done);
    ++s.episodes;
    s.falls += r.info.outcome == env::ResetOutcome::kFell;
    s.diverged += r.info.diverged;
    len += r.info.episode_steps;
    ret += r.info.episode_return;
  }
  s.mean_reward /= s.steps;
  s.mean_r_lv /= s.steps;
  s.mean_episode_len = len / episodes;
  s.mean_episode_return = ret / episodes;
  return s;
}

}  // namespace quadloco::ppo
