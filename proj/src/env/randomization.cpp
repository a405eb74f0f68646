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

#include "quadloco/env/randomization.hpp"

#include <string>

#include "quadloco/error.hpp"

namespace quadloco::env {

namespace {

void check_range(const ScaleRange& r, const char* name) {
  if (!(r.lo > 0.0) || !(r.lo <= 1.0) || !(r.hi >= 1.0)) {
    throw ConfigError(std::string("randomization: ") + name +
                      " range must satisfy 0 < lo <= 1 <= hi");
  }
}

double draw(std::mt19937_64& rng, const ScaleRange& r) {
  if (r.lo == r.hi) return r.lo;
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

}  // namespace

void RandomizationConfig::validate() const {
  check_range(friction, "friction");
  check_range(mass, "mass");
  check_range(kp, "kp");
  check_range(kd, "kd");
  if (!(push_max >= 0.0)) throw ConfigError("randomization: push_max must be >= 0");
}

sim::RobotModel randomize(const sim::RobotModel& model, std::mt19937_64& rng,
                          const RandomizationConfig& config) {
  if (!config.enabled) return model;
  sim::RobotModel m = model;
  m.friction *= draw(rng, config.friction);
  const double body = draw(rng, config.mass);
  m.body_mass *= body;
  m.body_inertia *= body;
  const double leg = draw(rng, config.mass);
  m.thigh_mass *= leg;
  m.shank_mass *= leg;
  m.foot_mass *= leg;
  m.kp *= draw(rng, config.kp);
  m.kd *= draw(rng, config.kd);
  return m;
}

}  // namespace quadloco::env
