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

#ifndef QUADLOCO_ENV_ENV_HPP_
#define QUADLOCO_ENV_ENV_HPP_

#include <cstdint>
#include <memory>
#include <random>

#include "quadloco/env/command.hpp"
#include "quadloco/env/observation.hpp"
#include "quadloco/env/randomization.hpp"
#include "quadloco/env/reward.hpp"
#include "quadloco/sim/robot_model.hpp"
#include "quadloco/sim/sim_state.hpp"
#include "quadloco/sim/terrain.hpp"

namespace quadloco::env {

enum class ResetOutcome { kContinue, kFell, kTimeout };

// Body contact ends the episode as a fall; otherwise it times out once
// t >= max_time.
ResetOutcome check_reset(const sim::SimState& state, double t,
                         double max_time = 15.0);

struct EnvConfig {
  sim::RobotModel model;
  double sim_dt = 0.005;      // s
  int substeps = 4;           // control period = substeps * sim_dt
  double max_episode_time = 15.0;
  double spawn_height = 0.30;
  double spawn_radius = 0.0;  // m, random spawn offset in x and y
  CommandRanges commands;
  RewardWeights weights;
  RandomizationConfig randomization{.enabled = false};
  double obs_noise_std = 0.0;

  double control_dt() const { return sim_dt * substeps; }
  void validate() const;
};

struct StepInfo {
  ResetOutcome outcome = ResetOutcome::kContinue;
  bool diverged = false;
  RewardTerms terms;
  sim::JointVector tau = sim::JointVector::Zero();  // last substep
  double episode_return = 0.0;
  int episode_steps = 0;
};

struct StepResult {
  Observation obs;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

// One simulated robot. The terrain is shared read-only between
// environments.
class Env {
 public:
  Env(EnvConfig config, std::shared_ptr<const sim::Terrain> terrain,
      std::uint64_t seed);

  // Samples a command and (when enabled) a randomized model, then spawns the
  // robot at rest.
  const Observation& reset();
  // Starts an episode from an explicit state and command with the nominal
  // model.
  const Observation& reset_to(const sim::SimState& state, const Command& cmd);

  // Throws ContractError when the episode is already over.
  StepResult step(const sim::JointVector& action);

  void set_terrain(std::shared_ptr<const sim::Terrain> terrain) {
    terrain_ = std::move(terrain);
  }
  void set_command(const Command& cmd);
  // Instantaneous change of the world-frame horizontal base velocity.
  void push(double vx_world, double vy_world);
  // Instantaneous change of the body-frame base velocity.
  void set_body_velocity(const sim::Vec3& v);

  const sim::SimState& state() const { return state_; }
  const Command& command() const { return command_; }
  const Observation& observation() const { return obs_; }
  const sim::RobotModel& model() const { return model_; }
  const sim::Terrain& terrain() const { return *terrain_; }
  const EnvConfig& config() const { return config_; }
  const sim::JointVector& last_action() const { return last_action_; }
  double episode_time() const { return steps_ * config_.control_dt(); }
  int episode_steps() const { return steps_; }
  bool done() const { return done_; }

 private:
  Observation make_observation();

  EnvConfig config_;
  std::shared_ptr<const sim::Terrain> terrain_;
  std::mt19937_64 rng_;
  sim::RobotModel model_;
  sim::SimState state_;
  Command command_;
  sim::JointVector last_action_ = sim::JointVector::Zero();
  Observation obs_ = Observation::Zero();
  int steps_ = 0;
  int next_push_step_ = 0;
  double episode_return_ = 0.0;
  bool done_ = true;
};

}  // namespace quadloco::env

#endif  // QUADLOCO_ENV_ENV_HPP_
