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

#ifndef QUADLOCO_SIM_TRAJECTORY_HPP_
#define QUADLOCO_SIM_TRAJECTORY_HPP_

#include <ostream>
#include <string>

#include "quadloco/sim/sim_state.hpp"

namespace quadloco::sim {

// segment, t, base pose (7), body velocities (6), theta (12), tau (12),
// foot/knee contacts (8), body contact.
std::string trajectory_header();

// Streams one CSV row per recorded state. Numbers use the shortest
// round-trip representation.
class TrajectoryWriter {
 public:
  explicit TrajectoryWriter(std::ostream& out);
  void record(int segment, const SimState& state, const JointVector& tau);
  long rows() const { return rows_; }

 private:
  std::ostream& out_;
  long rows_ = 0;
};

}  // namespace quadloco::sim

#endif  // QUADLOCO_SIM_TRAJECTORY_HPP_
