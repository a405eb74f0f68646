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

#include "quadloco/env/observation.hpp"

namespace quadloco::env {

sim::Vec3 attitude(const sim::Quat& q) {
  // -(third row of the body->world rotation), i.e. R^T (0, 0, -1).
  return {-2.0 * (q.x * q.z - q.w * q.y), -2.0 * (q.y * q.z + q.w * q.x),
          -(1.0 - 2.0 * (q.x * q.x + q.y * q.y))};
}

Observation default_input_scale() {
  Observation s = Observation::Ones();
  s.segment<3>(kObsAngularVelocity).setConstant(0.25);
  s[kObsCommand + 2] = 0.5;
  s.segment<sim::kNumJoints>(kObsJointVelocity).setConstant(0.05);
  return s;
}

Observation observe(const sim::SimState& state, const Command& cmd,
                    const sim::JointVector& last_action) {
  Observation o;
  o.segment<3>(kObsLinearVelocity) = state.base_linear_velocity;
  o.segment<3>(kObsAngularVelocity) = state.base_angular_velocity;
  o[kObsCommand + 0] = cmd.vx;
  o[kObsCommand + 1] = cmd.vy;
  o[kObsCommand + 2] = cmd.wz;
  o.segment<3>(kObsAttitude) = attitude(state.base_orientation);
  o.segment<sim::kNumJoints>(kObsJointPosition) = state.theta;
  o.segment<sim::kNumJoints>(kObsJointVelocity) = state.theta_dot;
  o.segment<sim::kNumJoints>(kObsLastAction) = last_action;
  return o;
}

}  // namespace quadloco::env
