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

#include "quadloco/sim/sim_state.hpp"

#include <cmath>

namespace quadloco::sim {

std::vector<double> SimState::flatten() const {
  std::vector<double> out;
  out.reserve(50);
  out.insert(out.end(), base_position.data(), base_position.data() + 3);
  out.push_back(base_orientation.w);
  out.push_back(base_orientation.x);
  out.push_back(base_orientation.y);
  out.push_back(base_orientation.z);
  out.insert(out.end(), base_linear_velocity.data(), base_linear_velocity.data() + 3);
  out.insert(out.end(), base_angular_velocity.data(), base_angular_velocity.data() + 3);
  out.insert(out.end(), theta.data(), theta.data() + kNumJoints);
  out.insert(out.end(), theta_dot.data(), theta_dot.data() + kNumJoints);
  for (const Vec3& a : foot_anchor) out.insert(out.end(), a.data(), a.data() + 3);
  out.push_back(sim_time);
  return out;
}

bool SimState::all_finite() const {
  for (double v : flatten()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

JointVector mirror_joints(const JointVector& v) {
  JointVector out;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const int twin = mirror_leg(leg);
    out[3 * leg + kAbduction] = -v[3 * twin + kAbduction];
    out[3 * leg + kFlexion] = v[3 * twin + kFlexion];
    out[3 * leg + kKnee] = v[3 * twin + kKnee];
  }
  return out;
}

SimState mirror_sim_state(const SimState& s) {
  SimState m;
  m.base_position = Vec3(s.base_position.x(), -s.base_position.y(), s.base_position.z());
  m.base_orientation = {s.base_orientation.w, -s.base_orientation.x,
                        s.base_orientation.y, -s.base_orientation.z};
  m.base_linear_velocity = Vec3(s.base_linear_velocity.x(), -s.base_linear_velocity.y(),
                                s.base_linear_velocity.z());
  // Angular velocity is a pseudovector: the reflection flips roll and yaw rates.
  m.base_angular_velocity =
      Vec3(-s.base_angular_velocity.x(), s.base_angular_velocity.y(),
           -s.base_angular_velocity.z());
  m.theta = mirror_joints(s.theta);
  m.theta_dot = mirror_joints(s.theta_dot);
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const int twin = mirror_leg(leg);
    m.contact.foot[leg] = s.contact.foot[twin];
    m.contact.knee[leg] = s.contact.knee[twin];
    const Vec3& a = s.foot_anchor[twin];
    m.foot_anchor[leg] = Vec3(a.x(), -a.y(), a.z());
    m.anchor_active[leg] = s.anchor_active[twin];
  }
  m.contact.body = s.contact.body;
  m.sim_time = s.sim_time;
  return m;
}

}  // namespace quadloco::sim
