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

#include "quadloco/env/reward.hpp"

#include <cmath>

#include "quadloco/env/observation.hpp"

namespace quadloco::env {

namespace {

// Sums over joints are taken per left/right leg pair so that the result is
// bitwise invariant under the mirror map.
template <typename F>
double pairwise_joint_sum(F f) {
  double total = 0.0;
  for (int front_back = 0; front_back < 2; ++front_back) {
    double pair = 0.0;
    for (int j = 0; j < sim::kJointsPerLeg; ++j) {
      const int left = 3 * (2 * front_back) + j;
      const int right = 3 * (2 * front_back + 1) + j;
      pair += f(left) + f(right);
    }
    total += pair;
  }
  return total;
}

}  // namespace

RewardTerms reward_terms([[maybe_unused]] const sim::SimState& prev,
                         const sim::SimState& cur, const sim::JointVector& tau,
                         const sim::JointVector& action,
                         const sim::JointVector& prev_action,
                         const Command& cmd) {
  const sim::Vec3& v = cur.base_linear_velocity;
  const sim::Vec3& w = cur.base_angular_velocity;
  RewardTerms r;
  r.lv = std::exp(-3.0 * std::hypot(v.x() - cmd.vx, v.y() - cmd.vy));
  const double dwz = w.z() - cmd.wz;
  r.az = std::exp(-3.0 * dwz * dwz);
  r.lvp = -v.z() * v.z();
  r.azp = -(w.x() * w.x() + w.y() * w.y());
  const sim::Vec3 g = attitude(cur.base_orientation);
  r.g = -std::hypot(g.x(), g.y());
  r.tau = -pairwise_joint_sum([&](int i) { return std::fabs(tau[i]); });
  r.collide = cur.contact.any_knee() ? -1.0 : 0.0;
  r.ar = -std::sqrt(pairwise_joint_sum([&](int i) {
    const double d = action[i] - prev_action[i];
    return d * d;
  }));
  return r;
}

double total_reward(const RewardTerms& t, const RewardWeights& w) {
  const double aim = w.lv * t.lv + w.az * t.az;
  const double penalty = w.lvp * t.lvp + w.azp * t.azp + w.g * t.g +
                         w.tau * t.tau + w.collide * t.collide + w.ar * t.ar;
  return aim + penalty;
}

}  // namespace quadloco::env
