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

#include "quadloco/sim/trajectory.hpp"

#include <charconv>
#include <cmath>

namespace quadloco::sim {

namespace {

void put(std::string& line, double v) {
  line.push_back(',');
  if (std::isnan(v)) {
    line += "nan";
  } else if (std::isinf(v)) {
    line += v > 0 ? "inf" : "-inf";
  } else {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    line.append(buf, res.ptr);
  }
}

}  // namespace

std::string trajectory_header() {
  std::string h = "segment,t,px,py,pz,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz";
  for (int i = 0; i < kNumJoints; ++i) h += ",theta_" + std::to_string(i);
  for (int i = 0; i < kNumJoints; ++i) h += ",tau_" + std::to_string(i);
  for (int l = 0; l < kNumLegs; ++l) h += ",foot_" + std::to_string(l);
  for (int l = 0; l < kNumLegs; ++l) h += ",knee_" + std::to_string(l);
  return h + ",body";
}

TrajectoryWriter::TrajectoryWriter(std::ostream& out) : out_(out) {
  out_ << trajectory_header() << '\n';
}

void TrajectoryWriter::record(int segment, const SimState& s, const JointVector& tau) {
  std::string line = std::to_string(segment);
  put(line, s.sim_time);
  for (int i = 0; i < 3; ++i) put(line, s.base_position[i]);
  put(line, s.base_orientation.w);
  put(line, s.base_orientation.x);
  put(line, s.base_orientation.y);
  put(line, s.base_orientation.z);
  for (int i = 0; i < 3; ++i) put(line, s.base_linear_velocity[i]);
  for (int i = 0; i < 3; ++i) put(line, s.base_angular_velocity[i]);
  for (int i = 0; i < kNumJoints; ++i) put(line, s.theta[i]);
  for (int i = 0; i < kNumJoints; ++i) put(line, tau[i]);
  for (bool b : s.contact.foot) line += b ? ",1" : ",0";
  for (bool b : s.contact.knee) line += b ? ",1" : ",0";
  line += s.contact.body ? ",1\n" : ",0\n";
  out_ << line;
  ++rows_;
}

}  // namespace quadloco::sim
