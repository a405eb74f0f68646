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

// Independent scalar evaluations used by the unit tests and the acceptance run.

#ifndef QUADLOCO_TESTS_SUPPORT_ORACLES_HPP_
#define QUADLOCO_TESTS_SUPPORT_ORACLES_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include "quadloco/env/command.hpp"
#include "quadloco/sim/sim_state.hpp"

namespace quadloco::testing {

// Plain scalar evaluation of the eight terms and the weighted total.
struct ScalarReward {
  double lv, az, lvp, azp, g, tau, collide, ar, total;
};

ScalarReward scalar_reward(const sim::SimState& s, const sim::JointVector& tau,
                           const sim::JointVector& a, const sim::JointVector& prev,
                           const env::Command& c) {
  ScalarReward r{};
  const double ex = s.base_linear_velocity[0] - c.vx;
  const double ey = s.base_linear_velocity[1] - c.vy;
  r.lv = std::exp(-3.0 * std::sqrt(ex * ex + ey * ey));
  const double ez = s.base_angular_velocity[2] - c.wz;
  r.az = std::exp(-3.0 * ez * ez);
  r.lvp = -s.base_linear_velocity[2] * s.base_linear_velocity[2];
  r.azp = -(s.base_angular_velocity[0] * s.base_angular_velocity[0] +
            s.base_angular_velocity[1] * s.base_angular_velocity[1]);
  // Third row of the body-to-world matrix, negated, is gravity in the body frame.
  const sim::Quat& q = s.base_orientation;
  const double gx = -2.0 * (q.x * q.z - q.w * q.y);
  const double gy = -2.0 * (q.y * q.z + q.w * q.x);
  r.g = -std::sqrt(gx * gx + gy * gy);
  double t = 0.0, d2 = 0.0;
  for (int i = 0; i < 12; ++i) {
    t += std::abs(tau[i]);
    d2 += (a[i] - prev[i]) * (a[i] - prev[i]);
  }
  r.tau = -t;
  bool knee = false;
  for (bool k : s.contact.knee) knee = knee || k;
  r.collide = knee ? -1.0 : 0.0;
  r.ar = -std::sqrt(d2);
  r.total = (r.lv + 0.5 * r.az) + (3.0 * r.lvp + 0.05 * r.azp + r.g + 5e-4 * r.tau +
                                   0.25 * r.collide + 0.1 * r.ar);
  return r;
}

// A_t = sum_l (gamma lambda)^l delta_{t+l}, truncated at the first done.
struct BruteForce {
  std::vector<double> adv, ret;
};

BruteForce brute_force_gae(const std::vector<double>& r, const std::vector<double>& v,
                           const std::vector<std::uint8_t>& d, const std::vector<double>& boot,
                           double last, double gamma, double lambda) {
  const std::size_t n = r.size();
  std::vector<double> delta(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double next = t + 1 < n ? v[t + 1] : last;
    delta[t] = r[t] + gamma * next * (1 - d[t]) + gamma * boot[t] - v[t];
  }
  BruteForce out{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t t = 0; t < n; ++t) {
    double sum = 0.0, w = 1.0;
    for (std::size_t k = t; k < n; ++k) {
      sum += w * delta[k];
      if (d[k]) break;
      w *= gamma * lambda;
    }
    out.adv[t] = sum;
    out.ret[t] = sum + v[t];
  }
  return out;
}

}  // namespace quadloco::testing

#endif  // QUADLOCO_TESTS_SUPPORT_ORACLES_HPP_
