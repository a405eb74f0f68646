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

#ifndef QUADLOCO_ENV_OBSERVATION_HPP_
#define QUADLOCO_ENV_OBSERVATION_HPP_

#include <cmath>

#include <Eigen/Dense>

#include "quadloco/env/command.hpp"
#include "quadloco/sim/sim_state.hpp"

namespace quadloco::env {

inline constexpr int kObsDim = 48;
inline constexpr int kActionDim = sim::kNumJoints;

// Offsets of the observation blocks.
inline constexpr int kObsLinearVelocity = 0;
inline constexpr int kObsAngularVelocity = 3;
inline constexpr int kObsCommand = 6;
inline constexpr int kObsAttitude = 9;
inline constexpr int kObsJointPosition = 12;
inline constexpr int kObsJointVelocity = 24;
inline constexpr int kObsLastAction = 36;

using Observation = Eigen::Matrix<double, kObsDim, 1>;

// Gravity direction (0, 0, -1) expressed in the body frame.
sim::Vec3 attitude(const sim::Quat& q);

// Roll angle recovered from an attitude vector; positive when the right
// side is down.
inline double roll_from_attitude(double gy, double gz) {
  return std::atan2(-gy, -gz);
}

// Per-entry input scaling for the networks. Mirror-paired entries share a
// scale.
Observation default_input_scale();

// Layout: v (3), omega (3), command (3), attitude (3), theta (12),
// theta_dot (12), last action (12).
Observation observe(const sim::SimState& state, const Command& cmd,
                    const sim::JointVector& last_action);

}  // namespace quadloco::env

#endif  // QUADLOCO_ENV_OBSERVATION_HPP_
