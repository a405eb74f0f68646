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

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "fixtures.hpp"
#include "quadloco/env/env.hpp"
#include "quadloco/env/observation.hpp"
#include "quadloco/error.hpp"
#include "quadloco/mirror/mirror.hpp"
#include "quadloco/mirror/signed_permutation.hpp"

namespace quadloco::mirror {
namespace {

using testing::random_joints;
using testing::random_net;
using testing::random_state;
using testing::uniform;

Eigen::VectorXd random_vector(std::mt19937_64& rng, int n, double scale = 2.0) {
  return Eigen::VectorXd::NullaryExpr(n, [&] { return uniform(rng, -scale, scale); });
}

nn::Policy random_policy(std::mt19937_64& rng) {
  nn::Policy p;
  p.net = random_net(rng, {env::kObsDim, 24, env::kActionDim}, 0.2);
  p.head = nn::GaussianHead(env::kActionDim, -1.0);
  p.input_scale = env::default_input_scale();
  return p;
}

env::Command random_command(std::mt19937_64& rng) {
  return {uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -3, 3)};
}

TEST(SignedPermutation, RejectsInvalidMaps) {
  EXPECT_THROW(SignedPermutation({0, 0}, {1, 1}), ConfigError);
  EXPECT_THROW(SignedPermutation({1, 0}, {1, 2}), ConfigError);
  EXPECT_THROW(SignedPermutation({0, 1}, {1}), ConfigError);
  const SignedPermutation p({1, 0, 2}, {1, 1, -1});
  EXPECT_THROW(p.apply(Eigen::VectorXd::Ones(4)), ShapeError);
  const Eigen::Vector3d y = p.apply(Eigen::Vector3d(1, 2, 3));
  EXPECT_EQ(y, Eigen::Vector3d(2, 1, -3));
  EXPECT_EQ(p.matrix() * Eigen::Vector3d(1, 2, 3), y);
}

TEST(MirrorMaps, InvolutionsAreExact) {
  const MirrorMaps maps = build_mirror_maps();
  ASSERT_EQ(maps.state.size(), 48);
  ASSERT_EQ(maps.action.size(), 12);
  EXPECT_TRUE(maps.state.is_involution());
  EXPECT_TRUE(maps.action.is_involution());
  std::mt19937_64 rng(1);
  for (int k = 0; k < 1000; ++k) {
    const Eigen::VectorXd x = random_vector(rng, 48);
    ASSERT_EQ(maps.state.apply(maps.state.apply(x)), x);
    const Eigen::VectorXd a = random_vector(rng, 12);
    ASSERT_EQ(maps.action.apply(maps.action.apply(a)), a);
  }
}

TEST(MirrorMaps, BlockSigns) {
  const MirrorMaps maps = build_mirror_maps();
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(48, 1, 48);
  const Eigen::VectorXd y = maps.state.apply(x);
  EXPECT_EQ(y.segment<3>(0), Eigen::Vector3d(1, -2, 3));
  EXPECT_EQ(y.segment<3>(3), Eigen::Vector3d(-4, 5, -6));
  EXPECT_EQ(y.segment<3>(6), Eigen::Vector3d(7, -8, -9));
  EXPECT_EQ(y.segment<3>(9), Eigen::Vector3d(10, -11, 12));
  // theta block: fl takes fr's entries, abduction negated.
  EXPECT_EQ(y.segment<3>(12), Eigen::Vector3d(-16, 17, 18));
  EXPECT_EQ(y.segment<3>(15), Eigen::Vector3d(-13, 14, 15));
  EXPECT_EQ(y.segment<12>(36), maps.action.apply(x.segment<12>(36)));
  EXPECT_THROW(build_mirror_maps("v,omega,theta"), ConfigError);
  EXPECT_THROW(build_mirror_maps(kCanonicalLayout, "fl,rl,fr,rr"), ConfigError);
}

TEST(MirrorMaps, ActionMapMatchesJointReflection) {
  const MirrorMaps maps = build_mirror_maps();
  std::mt19937_64 rng(2);
  for (int k = 0; k < 100; ++k) {
    const sim::JointVector a = random_joints(rng, 1.0);
    EXPECT_EQ(maps.action.apply(a), Eigen::VectorXd(sim::mirror_joints(a)));
  }
}

TEST(MirrorMaps, SymmetricObservationIsFixedPoint) {
  const MirrorMaps maps = build_mirror_maps();
  const sim::RobotModel model;
  sim::SimState s = sim::standing_state(model, sim::Terrain::flat());
  s.base_linear_velocity = sim::Vec3(0.8, 0.0, -0.1);
  s.base_angular_velocity = sim::Vec3(0.0, 0.4, 0.0);
  const env::Observation o = env::observe(s, {1.0, 0.0, 0.0}, sim::JointVector::Zero());
  EXPECT_EQ(maps.state.apply(o), Eigen::VectorXd(o));
}

TEST(MirrorMaps, ConsistencyTriangle) {
  const MirrorMaps maps = build_mirror_maps();
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const sim::SimState s = random_state(rng);
    const env::Command c = random_command(rng);
    const sim::JointVector a = random_joints(rng, 1.0);
    const Eigen::VectorXd lhs = maps.state.apply(env::observe(s, c, a));
    const env::Observation rhs = env::observe(sim::mirror_sim_state(s), env::mirror_command(c),
                                              sim::mirror_joints(a));
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(MirrorEval, ZeroPolicyAndDoubleMirror) {
  const MirrorMaps maps = build_mirror_maps();
  std::mt19937_64 rng(4);
  nn::Policy zero;
  zero.net = nn::DenseNet({48, 8, 12});
  zero.head = nn::GaussianHead(12);
  const nn::Policy p = random_policy(rng);
  nn::Policy twice = p;
  twice.net = mirrored_net(mirrored_net(p.net, maps), maps);
  for (int k = 0; k < 100; ++k) {
    const Eigen::VectorXd x = random_vector(rng, 48);
    EXPECT_EQ(mirror_eval(zero, maps, x), Eigen::VectorXd::Zero(12));
    const Eigen::VectorXd base = p.mean(x);
    const Eigen::VectorXd back = maps.action.apply(mirror_eval(p, maps, maps.state.apply(x)));
    EXPECT_EQ(back, base);
    EXPECT_LT((twice.mean(x) - base).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_THROW(mirror_eval(p, maps, Eigen::VectorXd::Zero(47)), ShapeError);
}

TEST(MirrorEval, MirroredNetMatchesWrapper) {
  const MirrorMaps maps = build_mirror_maps();
  std::mt19937_64 rng(5);
  const nn::DenseNet net = random_net(rng, {48, 16, 16, 12});
  const nn::DenseNet m = mirrored_net(net, maps);
  for (int k = 0; k < 100; ++k) {
    const Eigen::VectorXd x = random_vector(rng, 48);
    const Eigen::VectorXd expected = maps.action.apply(net.forward(maps.state.apply(x)));
    EXPECT_LT((m.forward(x) - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MirrorEval, SymmetrizedNetIsEquivariant) {
  const MirrorMaps maps = build_mirror_maps();
  std::mt19937_64 rng(6);
  const nn::DenseNet net = random_net(rng, {48, 16, 12});
  nn::Policy p;
  p.net = symmetrized_net(net, maps);
  p.head = nn::GaussianHead(12);
  for (int k = 0; k < 100; ++k) {
    const Eigen::VectorXd x = random_vector(rng, 48);
    const Eigen::VectorXd avg =
        0.5 * (net.forward(x) + maps.action.apply(net.forward(maps.state.apply(x))));
    EXPECT_LT((p.mean(x) - avg).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((mirror_eval(p, maps, x) - p.mean(x)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MirrorPolicy, RolloutMirrorsBaseRollout) {
  const MirrorMaps maps = build_mirror_maps();
  std::mt19937_64 rng(7);
  env::EnvConfig cfg;
  cfg.randomization.enabled = false;
  const sim::RobotModel model;
  for (int trial = 0; trial < 3; ++trial) {
    const nn::Policy p = random_policy(rng);
    const sim::SimState s0 = testing::perturbed_standing(rng, model, sim::Terrain::flat());
    const env::Command c = random_command(rng);
    auto flat = std::make_shared<const sim::Terrain>();
    env::Env base(cfg, flat, 0), mirrored(cfg, flat, 0);
    base.reset_to(s0, c);
    mirrored.reset_to(sim::mirror_sim_state(s0), env::mirror_command(c));
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      const env::StepResult rb = base.step(p.mean(base.observation()));
      const env::StepResult rm =
          mirrored.step(sim::JointVector(mirror_eval(p, maps, mirrored.observation())));
      const auto a = sim::mirror_sim_state(base.state()).flatten();
      const auto b = mirrored.state().flatten();
      for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
      ASSERT_EQ(rb.done, rm.done);
      if (rb.done) break;
    }
    EXPECT_LT(worst, 1e-6);
  }
}

TEST(ImpactDecision, DecisionTable) {
  EXPECT_EQ(impact_decision(7, 2), ImpactDecision::kLeftAdvantage);
  EXPECT_EQ(impact_decision(2, 7), ImpactDecision::kRightAdvantage);
  EXPECT_EQ(impact_decision(4, 4), ImpactDecision::kHalve);
  EXPECT_EQ(impact_decision(0, 0), ImpactDecision::kGrow);
  EXPECT_EQ(next_vmax(ImpactDecision::kHalve, 1.0), 0.5);
  EXPECT_EQ(next_vmax(ImpactDecision::kGrow, 1.0), 1.5);
  EXPECT_EQ(next_vmax(ImpactDecision::kLeftAdvantage, 1.0), 1.0);
}

ActionFn mean_of(nn::Policy p) {
  return [p = std::move(p)](const env::Observation& o) { return sim::JointVector(p.mean(o)); };
}

env::EnvConfig impact_env() {
  env::EnvConfig cfg;
  cfg.randomization.enabled = false;
  return cfg;
}

TEST(ImpactTest, AsymmetricPolicyHasLeftAdvantage) {
  const ImpactTestResult r =
      impact_test(mean_of(testing::asymmetric_policy()), impact_env(), ImpactTestConfig{});
  ASSERT_TRUE(r.decisive);
  EXPECT_TRUE(r.left_advantage);
  EXPECT_GT(r.fall_to_right, r.fall_to_left);
  EXPECT_LE(r.fall_to_right + r.fall_to_left, 30);
  for (std::size_t k = 0; k + 1 < r.trials.size(); k += 2) {
    EXPECT_LT(r.trials[k].push_vy, 0.0);
    EXPECT_EQ(r.trials[k + 1].push_vy, -r.trials[k].push_vy);
    EXPECT_LT(std::abs(r.trials[k].push_vy), r.trials[k].v_max);
  }
  const Controller c = compose_controller(testing::asymmetric_policy(), r);
  EXPECT_EQ(c.selector().side, AdvantageSide::kLeft);
}

TEST(ImpactTest, TiesAdaptVmaxUntilCap) {
  nn::Policy zero;
  zero.net = nn::DenseNet({48, 4, 12});
  zero.head = nn::GaussianHead(12);
  ImpactTestConfig cfg;
  cfg.max_iterations = 4;
  const ImpactTestResult r = impact_test(mean_of(zero), impact_env(), cfg);
  EXPECT_FALSE(r.decisive);
  ASSERT_EQ(r.iterations.size(), 4u);
  EXPECT_EQ(r.iterations[0].v_max, 1.0);
  for (std::size_t i = 0; i < r.iterations.size(); ++i) {
    const ImpactIteration& it = r.iterations[i];
    EXPECT_EQ(it.fall_to_left, it.fall_to_right);
    EXPECT_EQ(it.decision, impact_decision(it.fall_to_right, it.fall_to_left));
    const double next = next_vmax(it.decision, it.v_max);
    if (i + 1 < r.iterations.size()) {
      EXPECT_EQ(r.iterations[i + 1].v_max, next);
    }
  }
  EXPECT_EQ(r.final_vmax, next_vmax(r.iterations.back().decision, r.iterations.back().v_max));
  try {
    compose_controller(zero, r);
    FAIL() << "expected an inconclusive error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInconclusive);
  }
}

TEST(ImpactTest, EquivariantPolicyNeverDecides) {
  const MirrorMaps maps = build_mirror_maps();
  std::mt19937_64 rng(8);
  nn::Policy p;
  p.net = symmetrized_net(random_net(rng, {48, 8, 12}, 0.05), maps);
  p.head = nn::GaussianHead(12);
  ImpactTestConfig cfg;
  cfg.max_iterations = 3;
  cfg.total_tests = 10;
  const ImpactTestResult r = impact_test(mean_of(p), impact_env(), cfg);
  EXPECT_FALSE(r.decisive);
  for (const ImpactIteration& it : r.iterations) EXPECT_EQ(it.fall_to_left, it.fall_to_right);
}

TEST(Selector, HysteresisExamples) {
  SelectorConfig left;
  EXPECT_EQ(select_network(left, Selection::kMirror, -0.3), Selection::kBase);
  Selection s = Selection::kBase;
  for (double roll : {-0.2, 0.01, -0.01}) {
    s = select_network(left, s, roll);
    EXPECT_EQ(s, Selection::kBase);
  }
  EXPECT_EQ(select_network(left, Selection::kBase, 0.2), Selection::kMirror);
  SelectorConfig right;
  right.side = AdvantageSide::kRight;
  EXPECT_EQ(select_network(right, Selection::kBase, -0.3), Selection::kMirror);
  EXPECT_EQ(select_network(right, Selection::kMirror, 0.3), Selection::kBase);
}

TEST(Selector, SingleZeroCrossingSwitchesAtMostOnce) {
  std::mt19937_64 rng(9);
  const SelectorConfig cfg;
  for (int trial = 0; trial < 200; ++trial) {
    // Monotone-in-trend roll trace with noise smaller than the band.
    const double start = uniform(rng, -0.5, -0.06), end = uniform(rng, 0.06, 0.5);
    Selection s = Selection::kBase;
    int switches = 0;
    for (int k = 0; k <= 100; ++k) {
      const double roll = start + (end - start) * k / 100.0 + uniform(rng, -0.04, 0.04);
      const Selection next = select_network(cfg, s, roll);
      switches += next != s;
      s = next;
    }
    EXPECT_LE(switches, 1);
    EXPECT_EQ(s, Selection::kMirror);
  }
}

TEST(Controller, RollFromAttitudeMatchesSimulator) {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 100; ++k) {
    const sim::Quat q = sim::Quat::from_euler(uniform(rng, -1.2, 1.2), uniform(rng, -1.2, 1.2),
                                              uniform(rng, -3, 3));
    const sim::Vec3 g = env::attitude(q);
    EXPECT_NEAR(env::roll_from_attitude(g.y(), g.z()), sim::to_euler(q).roll, 1e-9);
  }
}

TEST(Controller, RoutesBySelection) {
  const MirrorMaps maps = build_mirror_maps();
  std::mt19937_64 rng(11);
  const nn::Policy p = random_policy(rng);
  Controller c(p, maps, SelectorConfig{});
  sim::SimState s = random_state(rng);
  s.base_orientation = sim::Quat::from_euler(0.3, 0.0, 0.0);
  const env::Observation tilted_right = env::observe(s, {}, sim::JointVector::Zero());
  EXPECT_EQ(Eigen::VectorXd(c.act(tilted_right)), mirror_eval(p, maps, tilted_right));
  EXPECT_EQ(c.selection(), Selection::kMirror);
  s.base_orientation = sim::Quat::from_euler(-0.3, 0.0, 0.0);
  const env::Observation tilted_left = env::observe(s, {}, sim::JointVector::Zero());
  EXPECT_EQ(Eigen::VectorXd(c.act(tilted_left)), p.mean(tilted_left));
  EXPECT_EQ(c.selection(), Selection::kBase);
  nn::Policy wrong;
  wrong.net = nn::DenseNet({47, 12});
  EXPECT_THROW(Controller(wrong, maps, SelectorConfig{}), ShapeError);
}

TEST(Controller, EquivariantPolicyComposesToBase) {
  const MirrorMaps maps = build_mirror_maps();
  std::mt19937_64 rng(12);
  nn::Policy p;
  p.net = symmetrized_net(random_net(rng, {48, 16, 12}), maps);
  p.head = nn::GaussianHead(12);
  Controller c(p, maps, SelectorConfig{});
  for (int k = 0; k < 100; ++k) {
    const Eigen::VectorXd x = random_vector(rng, 48);
    EXPECT_LT((Eigen::VectorXd(c.act(x)) - p.mean(x)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Controller, SaveLoadRoundTripIsBitwise) {
  const MirrorMaps maps = build_mirror_maps();
  std::mt19937_64 rng(13);
  SelectorConfig sel;
  sel.side = AdvantageSide::kRight;
  sel.delta = 0.07;
  Controller a(random_policy(rng), maps, sel);
  testing::TempDir dir;
  save_controller(dir / "controller.json", a);
  Controller b = load_controller(dir / "controller.json");
  EXPECT_EQ(b.selector().side, AdvantageSide::kRight);
  EXPECT_EQ(b.selector().delta, 0.07);
  EXPECT_EQ(b.maps().state, maps.state);
  for (int k = 0; k < 100; ++k) {
    const env::Observation o = random_vector(rng, 48, 1.0);
    ASSERT_EQ(a.act(o), b.act(o));
    ASSERT_EQ(a.selection(), b.selection());
  }
  std::ofstream(dir / "broken.json") << R"({"kind": "controller"})";
  EXPECT_THROW(load_controller(dir / "broken.json"), IoError);
}

}  // namespace
}  // namespace quadloco::mirror
