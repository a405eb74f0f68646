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

#include "quadloco/env/env.hpp"

#include <cmath>
#include <numbers>

#include "quadloco/error.hpp"
#include "quadloco/sim/simulator.hpp"

namespace quadloco::env {

ResetOutcome check_reset(const sim::SimState& state, double t, double max_time) {
  if (state.contact.body) return ResetOutcome::kFell;
  if (t >= max_time) return ResetOutcome::kTimeout;
  return ResetOutcome::kContinue;
}

void EnvConfig::validate() const {
  model.validate();
  randomization.validate();
  if (!(sim_dt > 0.0) || substeps < 1) {
    throw ConfigError("env: sim_dt must be > 0 and substeps >= 1");
  }
  if (!(max_episode_time > 0.0)) throw ConfigError("env: episode length must be > 0");
  if (!(commands.vx_max >= 0.0) || !(commands.vy_max >= 0.0) ||
      !(commands.wz_max >= 0.0)) {
    throw ConfigError("env: command ranges must be >= 0");
  }
  if (!(obs_noise_std >= 0.0)) throw ConfigError("env: obs_noise_std must be >= 0");
}

Env::Env(EnvConfig config, std::shared_ptr<const sim::Terrain> terrain,
         std::uint64_t seed)
    : config_(std::move(config)),
      terrain_(std::move(terrain)),
      rng_(seed),
      model_(config_.model) {
  config_.validate();
  if (!terrain_) throw ConfigError("env: terrain is null");
}

Observation Env::make_observation() {
  Observation o = observe(state_, command_, last_action_);
  if (config_.obs_noise_std > 0.0) {
    std::normal_distribution<double> noise(0.0, config_.obs_noise_std);
    for (int i = 0; i < kObsDim; ++i) o[i] += noise(rng_);
  }
  return o;
}

const Observation& Env::reset() {
  command_ = sample_command(rng_, config_.commands);
  model_ = randomize(config_.model, rng_, config_.randomization);
  double x = 0.0;
  double y = 0.0;
  if (config_.spawn_radius > 0.0) {
    std::uniform_real_distribution<double> offset(-config_.spawn_radius,
                                                  config_.spawn_radius);
    x = offset(rng_);
    y = offset(rng_);
  }
  const double yaw =
      std::uniform_real_distribution<double>(-std::numbers::pi, std::numbers::pi)(rng_);
  state_ = sim::standing_state(model_, *terrain_, x, y, yaw, config_.spawn_height);
  last_action_.setZero();
  steps_ = 0;
  episode_return_ = 0.0;
  done_ = false;
  const RandomizationConfig& rc = config_.randomization;
  next_push_step_ =
      rc.enabled && rc.push_interval > 0.0 && rc.push_max > 0.0
          ? static_cast<int>(std::lround(rc.push_interval / config_.control_dt()))
          : -1;
  obs_ = make_observation();
  return obs_;
}

const Observation& Env::reset_to(const sim::SimState& state, const Command& cmd) {
  command_ = cmd;
  model_ = config_.model;
  state_ = state;
  state_.contact = sim::detect_contacts(model_, *terrain_, state_);
  last_action_.setZero();
  steps_ = 0;
  episode_return_ = 0.0;
  done_ = false;
  next_push_step_ = -1;
  obs_ = make_observation();
  return obs_;
}

void Env::set_command(const Command& cmd) {
  command_ = cmd;
  obs_ = make_observation();
}

void Env::push(double vx_world, double vy_world) {
  const sim::Mat3 r = state_.base_orientation.matrix();
  sim::Vec3 v = r * state_.base_linear_velocity;
  v.x() = vx_world;
  v.y() = vy_world;
  state_.base_linear_velocity = r.transpose() * v;
  obs_ = make_observation();
}

void Env::set_body_velocity(const sim::Vec3& v) {
  state_.base_linear_velocity = v;
  obs_ = make_observation();
}

StepResult Env::step(const sim::JointVector& action) {
  if (done_) throw ContractError("env: step() called on a finished episode");
  const sim::SimState prev = state_;
  StepResult result;
  sim::JointVector tau = sim::JointVector::Zero();
  try {
    for (int k = 0; k < config_.substeps; ++k) {
      tau = sim::drive_map(action, state_.theta, state_.theta_dot, model_);
      state_ = sim::step(state_, tau, *terrain_, config_.sim_dt, model_);
    }
  } catch (const sim::SimulationDiverged&) {
    result.info.diverged = true;
  }
  ++steps_;

  result.info.terms =
      reward_terms(prev, state_, tau, action, last_action_, command_);
  result.reward = result.info.diverged
                      ? 0.0
                      : total_reward(result.info.terms, config_.weights);
  result.info.tau = tau;
  last_action_ = action;
  result.info.outcome = result.info.diverged
                            ? ResetOutcome::kFell
                            : check_reset(state_, episode_time(),
                                          config_.max_episode_time);
  result.done = result.info.outcome != ResetOutcome::kContinue;
  done_ = result.done;
  episode_return_ += result.reward;
  result.info.episode_return = episode_return_;
  result.info.episode_steps = steps_;

  if (!done_ && steps_ == next_push_step_) {
    const RandomizationConfig& rc = config_.randomization;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double angle = 2.0 * std::numbers::pi * unit(rng_);
    const double speed = rc.push_max * unit(rng_);
    const sim::Vec3 v = state_.base_orientation.matrix() * state_.base_linear_velocity;
    push(v.x() + speed * std::cos(angle), v.y() + speed * std::sin(angle));
    next_push_step_ +=
        static_cast<int>(std::lround(rc.push_interval / config_.control_dt()));
  }
  obs_ = make_observation();
  result.obs = obs_;
  return result;
}

}  // namespace quadloco::env
