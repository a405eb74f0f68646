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

#ifndef QUADLOCO_ENV_REWARD_HPP_
#define QUADLOCO_ENV_REWARD_HPP_

#include <array>
#include <string_view>

#include "quadloco/env/command.hpp"
#include "quadloco/sim/sim_state.hpp"

namespace quadloco::env {

struct RewardTerms {
  double lv = 0.0;       // exp(-3 |v_xy - v_cxy|)
  double az = 0.0;       // exp(-3 (w_z - w_cz)^2)
  double lvp = 0.0;      // -v_z^2
  double azp = 0.0;      // -(w_x^2 + w_y^2)
  double g = 0.0;        // -|attitude_xy|
  double tau = 0.0;      // -sum |tau_i|
  double collide = 0.0;  // -1 if a knee touches the ground
  double ar = 0.0;       // -|a_t - a_prev|

  static constexpr std::array<std::string_view, 8> kNames = {
      "lv", "az", "lvp", "azp", "g", "tau", "collide", "ar"};
  std::array<double, 8> as_array() const {
    return {lv, az, lvp, azp, g, tau, collide, ar};
  }
};

struct RewardWeights {
  double lv = 1.0;
  double az = 0.5;
  double lvp = 3.0;
  double azp = 0.05;
  double g = 1.0;
  double tau = 5e-4;
  double collide = 0.25;
  double ar = 0.1;
};

// Terms of one control-step transition. `prev` completes the transition
// record; every current term is a function of the arriving state `cur`.
RewardTerms reward_terms(const sim::SimState& prev, const sim::SimState& cur,
                         const sim::JointVector& tau,
                         const sim::JointVector& action,
                         const sim::JointVector& prev_action,
                         const Command& cmd);

double total_reward(const RewardTerms& terms, const RewardWeights& weights = {});

}  // namespace quadloco::env

#endif  // QUADLOCO_ENV_REWARD_HPP_
