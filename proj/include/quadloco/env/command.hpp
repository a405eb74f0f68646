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

#ifndef QUADLOCO_ENV_COMMAND_HPP_
#define QUADLOCO_ENV_COMMAND_HPP_

#include <random>

namespace quadloco::env {

// Velocity command in the body frame.
struct Command {
  double vx = 0.0;  // m/s
  double vy = 0.0;  // m/s, positive to the left
  double wz = 0.0;  // rad/s

  friend bool operator==(const Command&, const Command&) = default;
};

struct CommandRanges {
  double vx_max = 2.0;
  double vy_max = 2.0;
  double wz_max = 3.14;
};

// Uniform over [-vx_max, vx_max] x [-vy_max, vy_max] x [-wz_max, wz_max].
Command sample_command(std::mt19937_64& rng, const CommandRanges& ranges = {});

inline Command mirror_command(const Command& c) { return {c.vx, -c.vy, -c.wz}; }

}  // namespace quadloco::env

#endif  // QUADLOCO_ENV_COMMAND_HPP_
