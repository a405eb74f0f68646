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

// Generators and fixtures shared by the unit tests and the acceptance binary.

#ifndef QUADLOCO_TESTS_SUPPORT_FIXTURES_HPP_
#define QUADLOCO_TESTS_SUPPORT_FIXTURES_HPP_

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "quadloco/app/pipelines.hpp"
#include "quadloco/env/observation.hpp"
#include "quadloco/nn/policy.hpp"
#include "quadloco/sim/sim_state.hpp"
#include "quadloco/sim/simulator.hpp"

namespace quadloco::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline sim::Vec3 random_vec3(std::mt19937_64& rng, double scale) {
  return {uniform(rng, -scale, scale), uniform(rng, -scale, scale),
          uniform(rng, -scale, scale)};
}

inline sim::JointVector random_joints(std::mt19937_64& rng, double scale) {
  sim::JointVector v;
  for (int i = 0; i < sim::kNumJoints; ++i) v[i] = uniform(rng, -scale, scale);
  return v;
}

// Unit quaternion rotating by `angle` about a random axis.
inline sim::Quat random_orientation(std::mt19937_64& rng, double max_angle) {
  sim::Vec3 axis = random_vec3(rng, 1.0);
  while (axis.norm() < 1e-3) axis = random_vec3(rng, 1.0);
  axis.normalize();
  const double angle = uniform(rng, -max_angle, max_angle);
  const double s = std::sin(0.5 * angle);
  return {std::cos(0.5 * angle), s * axis.x(), s * axis.y(), s * axis.z()};
}

// Arbitrary state over flat terrain; contact flags are random as well.
inline sim::SimState random_state(std::mt19937_64& rng) {
  const sim::RobotModel model;
  sim::SimState s;
  s.base_position = {uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, 0.1, 0.5)};
  s.base_orientation = random_orientation(rng, 1.0);
  s.base_linear_velocity = random_vec3(rng, 2.0);
  s.base_angular_velocity = random_vec3(rng, 3.0);
  s.theta = model.theta0 + random_joints(rng, 0.6);
  s.theta_dot = random_joints(rng, 5.0);
  std::bernoulli_distribution coin(0.5);
  for (int leg = 0; leg < sim::kNumLegs; ++leg) {
    s.contact.foot[leg] = coin(rng);
    s.contact.knee[leg] = coin(rng);
    s.foot_anchor[leg] = random_vec3(rng, 1.0);
    s.anchor_active[leg] = coin(rng);
  }
  s.contact.body = coin(rng);
  s.sim_time = uniform(rng, 0, 10);
  return s;
}

// Standing state with a random perturbation; starts a physically plausible
// rollout on flat terrain.
inline sim::SimState perturbed_standing(std::mt19937_64& rng, const sim::RobotModel& model,
                                        const sim::Terrain& terrain) {
  sim::SimState s = sim::standing_state(model, terrain, uniform(rng, -1, 1),
                                        uniform(rng, -1, 1), uniform(rng, -3, 3), 0.30);
  s.base_linear_velocity = random_vec3(rng, 0.5);
  s.base_angular_velocity = random_vec3(rng, 0.5);
  s.theta += random_joints(rng, 0.2);
  s.theta_dot = random_joints(rng, 1.0);
  s.contact = sim::detect_contacts(model, terrain, s);
  return s;
}

inline nn::DenseNet random_net(std::mt19937_64& rng, const std::vector<int>& sizes,
                               double scale = 0.5) {
  nn::DenseNet net(sizes);
  for (Eigen::Index i = 0; i < net.num_parameters(); ++i) {
    net.parameters()[i] = uniform(rng, -scale, scale);
  }
  return net;
}

// 48 -> 1 -> 12 policy that is clearly better on the left side. Its hidden
// unit fires on a rightward body velocity below -0.3 m/s and then keeps firing
// through the last-action input, folding every knee until the body touches
// down. A constant outward abduction widens the stance enough to ride out
// leftward pushes up to 1 m/s.
inline nn::Policy asymmetric_policy() {
  nn::Policy p;
  p.net = nn::DenseNet({env::kObsDim, 1, env::kActionDim});
  p.head = nn::GaussianHead(env::kActionDim, -1.0);
  const double gain = 100.0;
  p.net.weight(0)(0, env::kObsLinearVelocity + 1) = -gain;
  p.net.bias(0)[0] = -0.3 * gain;
  p.net.weight(0)(0, env::kObsLastAction + sim::kKnee) = -10.0;
  for (int leg = 0; leg < sim::kNumLegs; ++leg) {
    p.net.weight(1)(3 * leg + sim::kKnee, 0) = -1.0;
    p.net.bias(1)[3 * leg + sim::kKnee] = -1.0;
    p.net.weight(1)(3 * leg + sim::kFlexion, 0) = 1.0;
    p.net.bias(1)[3 * leg + sim::kFlexion] = 1.0;
    p.net.bias(1)[3 * leg + sim::kAbduction] = sim::leg_side(leg) > 0 ? 0.3 : -0.3;
  }
  return p;
}

// Open-loop trot whose left and right legs swing in antiphase, turning the
// body clockwise at roughly 1 rad/s. Stateful: keeps its own clock.
inline app::Actor turning_gait(double control_dt = 0.02) {
  auto step = std::make_shared<int>(0);
  app::Actor actor;
  actor.act = [step, control_dt](const env::Observation&) {
    const double phase = 2.0 * M_PI * (*step)++ * control_dt / 0.3;
    sim::JointVector a = sim::JointVector::Zero();
    for (int leg = 0; leg < sim::kNumLegs; ++leg) {
      const double side = sim::leg_side(leg);
      const bool first_pair = leg == 0 || leg == 3;
      const double p = first_pair ? phase : phase + M_PI;
      const double s = std::sin(p);
      a[3 * leg + sim::kAbduction] = 0.15 * side;
      a[3 * leg + sim::kFlexion] = 0.3 + 0.3 * side * std::cos(p);
      a[3 * leg + sim::kKnee] = s > 0.0 ? -0.9 * s : 0.0;
    }
    return a;
  };
  actor.reset = [step] { *step = 0; };
  return actor;
}

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "quadloco") {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            (tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Small, fast training configuration.
inline app::RunConfig tiny_config(const std::string& out_dir, int epochs = 2) {
  app::RunConfig c;
  c.epochs = epochs;
  c.num_envs = 8;
  c.batch_size = 8 * 32;
  c.hidden_layers = {16, 16};
  c.out_dir = out_dir;
  c.run_id = "tiny";
  c.checkpoint_every = 1000;
  return c;
}

}  // namespace quadloco::testing

#endif  // QUADLOCO_TESTS_SUPPORT_FIXTURES_HPP_
