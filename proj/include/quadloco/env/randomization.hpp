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

#ifndef QUADLOCO_ENV_RANDOMIZATION_HPP_
#define QUADLOCO_ENV_RANDOMIZATION_HPP_

#include <random>

#include "quadloco/sim/robot_model.hpp"

namespace quadloco::env {

struct ScaleRange {
  double lo = 1.0;
  double hi = 1.0;
};

struct RandomizationConfig {
  bool enabled = true;
  ScaleRange friction{0.5, 1.25};
  ScaleRange mass{0.9, 1.1};
  ScaleRange kp{0.9, 1.1};
  ScaleRange kd{0.9, 1.1};
  double push_max = 0.5;       // m/s, horizontal speed added by a push
  double push_interval = 5.0;  // s; pushes disabled when <= 0

  // Throws ConfigError unless every range is ordered, positive and
  // contains 1.
  void validate() const;
};

// Per-episode model perturbation. Leg parameters are shared by all legs,
// so the result stays left/right symmetric.
sim::RobotModel randomize(const sim::RobotModel& model, std::mt19937_64& rng,
                          const RandomizationConfig& config);

}  // namespace quadloco::env

#endif  // QUADLOCO_ENV_RANDOMIZATION_HPP_
