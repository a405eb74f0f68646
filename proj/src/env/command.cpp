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

#include "quadloco/env/command.hpp"

namespace quadloco::env {

Command sample_command(std::mt19937_64& rng, const CommandRanges& ranges) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Command c;
  c.vx = ranges.vx_max * unit(rng);
  c.vy = ranges.vy_max * unit(rng);
  c.wz = ranges.wz_max * unit(rng);
  return c;
}

}  // namespace quadloco::env
