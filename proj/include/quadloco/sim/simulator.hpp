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

#ifndef QUADLOCO_SIM_SIMULATOR_HPP_
#define QUADLOCO_SIM_SIMULATOR_HPP_

#include "quadloco/sim/robot_model.hpp"
#include "quadloco/sim/sim_state.hpp"
#include "quadloco/sim/terrain.hpp"

namespace quadloco::sim {

// tau_i = clamp(kp (a_i + theta0_i - theta_i) - kd theta_dot_i, +-tau_max)
JointVector drive_map(const JointVector& action, const JointVector& theta,
                      const JointVector& theta_dot, const RobotModel& model);

// Body-frame positions of the knee and foot centers of one leg, and the
// 3x3 Jacobians of those points with respect to the leg's joint angles.
struct LegKinematics {
  Vec3 knee;
  Vec3 foot;
  Mat3 knee_jacobian;  // third column is zero
  Mat3 foot_jacobian;
};

LegKinematics leg_kinematics(const RobotModel& model, int leg,
                             const JointVector& theta);

// Body-frame corners of the collision box, ordered so that entries 2k and
// 2k+1 are mirror images of each other.
std::array<Vec3, 8> body_corners(const RobotModel& model);

// Standing state: base at spawn_height above the terrain under (x, y), level,
// joints at theta0, at rest.
SimState standing_state(const RobotModel& model, const Terrain& terrain,
                        double x = 0.0, double y = 0.0, double yaw = 0.0,
                        double spawn_height = 0.30);

// Recomputes contact flags from geometry without touching dynamics.
ContactFlags detect_contacts(const RobotModel& model, const Terrain& terrain,
                             const SimState& state);

// Semi-implicit Euler step of the floating base and the 12 joints with
// penalty contacts. `tau` is clamped to +-tau_max before use. Throws
// SimulationDiverged if the resulting state is not finite.
SimState step(const SimState& state, const JointVector& tau,
              const Terrain& terrain, double dt, const RobotModel& model);

}  // namespace quadloco::sim

#endif  // QUADLOCO_SIM_SIMULATOR_HPP_
