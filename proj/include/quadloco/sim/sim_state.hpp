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

#ifndef QUADLOCO_SIM_SIM_STATE_HPP_
#define QUADLOCO_SIM_SIM_STATE_HPP_

#include <array>
#include <vector>

#include "quadloco/error.hpp"
#include "quadloco/sim/types.hpp"

namespace quadloco::sim {

struct ContactFlags {
  std::array<bool, kNumLegs> foot{};
  std::array<bool, kNumLegs> knee{};
  bool body = false;

  bool any_knee() const { return knee[0] || knee[1] || knee[2] || knee[3]; }
  friend bool operator==(const ContactFlags&, const ContactFlags&) = default;
};

// Floating-base quadruped state. Linear and angular base velocities are in
// the body frame; position and orientation are world-frame.
struct SimState {
  Vec3 base_position = Vec3::Zero();
  Quat base_orientation;
  Vec3 base_linear_velocity = Vec3::Zero();
  Vec3 base_angular_velocity = Vec3::Zero();
  JointVector theta = JointVector::Zero();
  JointVector theta_dot = JointVector::Zero();
  ContactFlags contact;
  // Sticking points of the tangential foot springs (world frame).
  std::array<Vec3, kNumLegs> foot_anchor{Vec3::Zero(), Vec3::Zero(),
                                         Vec3::Zero(), Vec3::Zero()};
  std::array<bool, kNumLegs> anchor_active{};
  double sim_time = 0.0;

  // All continuous quantities flattened in a fixed order: position (3),
  // quaternion wxyz (4), v (3), omega (3), theta (12), theta_dot (12),
  // anchors (12), time (1).
  std::vector<double> flatten() const;
  bool all_finite() const;
};

class SimulationDiverged : public Error {
 public:
  SimulationDiverged(const std::string& what, SimState state)
      : Error(ErrorCode::kDiverged, what), state_(std::move(state)) {}
  const SimState& state() const { return state_; }

 private:
  SimState state_;
};

// Reflection across the world x-z plane. Left and right legs swap roles and
// abduction angles change sign; flexion and knee angles are unchanged.
SimState mirror_sim_state(const SimState& state);

// Joint-space reflection used for joint angles, velocities, torques and
// actions.
JointVector mirror_joints(const JointVector& v);

}  // namespace quadloco::sim

#endif  // QUADLOCO_SIM_SIM_STATE_HPP_
