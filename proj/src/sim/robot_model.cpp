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

#include "quadloco/sim/robot_model.hpp"

#include <cmath>
#include <string>

#include "quadloco/error.hpp"

namespace quadloco::sim {

JointVector RobotModel::default_pose() {
  JointVector pose;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    pose[3 * leg + kAbduction] = 0.0;
    pose[3 * leg + kFlexion] = 0.8;
    pose[3 * leg + kKnee] = -1.6;
  }
  return pose;
}

std::array<double, 3> RobotModel::joint_inertia() const {
  const double l1 = thigh_length;
  const double l2 = shank_length;
  const double q1 = theta0[kFlexion];
  const double q2 = theta0[kKnee];
  // Sagittal-plane positions relative to the hip flexion axis.
  const double knee_x = -l1 * std::sin(q1);
  const double knee_z = -l1 * std::cos(q1);
  const double foot_x = knee_x - l2 * std::sin(q1 + q2);
  const double foot_z = knee_z - l2 * std::cos(q1 + q2);
  const double shank_mid_x = 0.5 * (knee_x + foot_x);
  const double shank_mid_z = 0.5 * (knee_z + foot_z);

  const double thigh_r2 = 0.25 * l1 * l1;
  const double shank_r2 = shank_mid_x * shank_mid_x + shank_mid_z * shank_mid_z;
  const double foot_r2 = foot_x * foot_x + foot_z * foot_z;
  const double flexion = thigh_mass * thigh_r2 + shank_mass * shank_r2 + foot_mass * foot_r2;
  const double knee = shank_mass * 0.25 * l2 * l2 + foot_mass * l2 * l2;
  // About the abduction axis the lateral link offset adds to every radius.
  const double d2 = abduction_link * abduction_link;
  const double abduction =
      thigh_mass * (0.25 * knee_z * knee_z + d2) +
      shank_mass * (shank_mid_z * shank_mid_z + d2) +
      foot_mass * (foot_z * foot_z + d2);
  return {abduction + joint_armature, flexion + joint_armature,
          knee + joint_armature};
}

void RobotModel::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("robot model: ") + name + " must be > 0");
    }
  };
  positive(body_mass, "body_mass");
  positive(body_inertia.minCoeff(), "body_inertia");
  positive(body_half_extents.minCoeff(), "body_half_extents");
  positive(effective_body_length, "effective_body_length");
  positive(thigh_length, "thigh_length");
  positive(shank_length, "shank_length");
  positive(thigh_mass, "thigh_mass");
  positive(shank_mass, "shank_mass");
  positive(foot_mass, "foot_mass");
  positive(joint_armature, "joint_armature");
  positive(foot_radius, "foot_radius");
  positive(knee_radius, "knee_radius");
  positive(tau_rated, "tau_rated");
  positive(contact_stiffness, "contact_stiffness");
  if (!(tau_max >= tau_rated)) {
    throw ConfigError("robot model: tau_max must be >= tau_rated");
  }
  if (kp < 0.0 || kd < 0.0) throw ConfigError("robot model: gains must be >= 0");
  if (contact_damping < 0.0 || friction < 0.0 || gravity < 0.0) {
    throw ConfigError("robot model: damping, friction and gravity must be >= 0");
  }
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const int twin = mirror_leg(leg);
    if (theta0[3 * leg + kAbduction] != -theta0[3 * twin + kAbduction] ||
        theta0[3 * leg + kFlexion] != theta0[3 * twin + kFlexion] ||
        theta0[3 * leg + kKnee] != theta0[3 * twin + kKnee]) {
      throw ConfigError("robot model: theta0 is not left/right symmetric");
    }
  }
}

}  // namespace quadloco::sim
