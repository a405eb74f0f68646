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

#ifndef QUADLOCO_SIM_ROBOT_MODEL_HPP_
#define QUADLOCO_SIM_ROBOT_MODEL_HPP_

#include <array>

#include "quadloco/sim/types.hpp"

namespace quadloco::sim {

// Parameters of the simplified quadruped. Every per-leg quantity is shared
// by all four legs, so the model is left/right symmetric by construction.
//
// The floating base carries the full body_mass; legs contribute only
// joint-space inertia (point masses plus rotor armature).
struct RobotModel {
  // Base.
  double body_mass = 13.5;                     // kg
  Vec3 body_inertia{0.0612, 0.2443, 0.2734};   // kg m^2, principal axes
  Vec3 body_half_extents{0.22, 0.09, 0.06};    // m, collision box
  double effective_body_length = 0.36;         // m, front to rear hip axes

  // Legs.
  double hip_lateral_offset = 0.047;   // m, abduction axis from centerline
  double abduction_link = 0.08;        // m, abduction axis to thigh plane
  double thigh_length = 0.2;           // m
  double shank_length = 0.2;           // m
  double thigh_mass = 0.2;             // kg, at thigh midpoint
  double shank_mass = 0.1;             // kg, at shank midpoint
  double foot_mass = 0.05;             // kg, at foot
  double joint_armature = 0.01;        // kg m^2, reflected rotor inertia
  double foot_radius = 0.02;           // m
  double knee_radius = 0.02;           // m

  // Drive mapping.
  JointVector theta0 = default_pose();
  double kp = 20.0;          // N m / rad
  double kd = 0.5;           // N m s / rad
  double tau_rated = 6.7;    // N m
  double tau_max = 33.5;     // N m

  // Contact.
  double friction = 0.8;
  double contact_stiffness = 5000.0;  // N / m
  double contact_damping = 50.0;      // N s / m

  double gravity = 9.81;  // m / s^2, along -z

  static JointVector default_pose();

  Vec3 hip_position(int leg) const {
    return {0.5 * effective_body_length * leg_fore_aft(leg),
            hip_lateral_offset * leg_side(leg), 0.0};
  }

  // Constant diagonal joint-space inertia of one leg (abduction, flexion,
  // knee) evaluated at theta0.
  std::array<double, 3> joint_inertia() const;

  // Throws ConfigError when a parameter is out of range.
  void validate() const;
};

}  // namespace quadloco::sim

#endif  // QUADLOCO_SIM_ROBOT_MODEL_HPP_
