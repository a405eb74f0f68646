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
#include <filesystem>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "quadloco/env/reward.hpp"
#include "quadloco/error.hpp"
#include "quadloco/nn/checkpoint.hpp"
#include "quadloco/ppo/collector.hpp"
#include "quadloco/ppo/ppo.hpp"
#include "quadloco/ppo/train.hpp"

namespace quadloco::ppo {
namespace {

using testing::brute_force_gae;
using testing::BruteForce;
using testing::uniform;

TEST(Gae, MatchesBruteForceOnRandomInstances) {
  std::mt19937_64 rng(4);
  std::bernoulli_distribution done(0.15), timeout(0.5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 20;
    std::vector<double> r(n), v(n), boot(n, 0.0);
    std::vector<std::uint8_t> d(n, 0);
    for (int t = 0; t < n; ++t) {
      r[t] = uniform(rng, -2, 2);
      v[t] = uniform(rng, -5, 5);
      d[t] = done(rng);
      if (d[t] && timeout(rng)) boot[t] = uniform(rng, -5, 5);
    }
    const double last = uniform(rng, -5, 5);
    const double gamma = uniform(rng, 0.9, 0.999), lambda = uniform(rng, 0.8, 1.0);
    std::vector<double> adv(n), ret(n);
    gae_segment(r, v, d, boot, last, gamma, lambda, adv, ret);
    const BruteForce bf = brute_force_gae(r, v, d, boot, last, gamma, lambda);
    for (int t = 0; t < n; ++t) {
      ASSERT_NEAR(adv[t], bf.adv[t], 1e-12) << trial << ":" << t;
      ASSERT_NEAR(ret[t], bf.ret[t], 1e-12);
    }
  }
}

TEST(Gae, LambdaZeroWithAllDonesIsOneStepTd) {
  const std::vector<double> r{1.0, -2.0, 0.5}, v{0.25, 0.5, -1.0}, boot(3, 0.0);
  const std::vector<std::uint8_t> d{1, 1, 1};
  std::vector<double> adv(3), ret(3);
  gae_segment(r, v, d, boot, 9.0, 0.99, 0.0, adv, ret);
  for (int t = 0; t < 3; ++t) EXPECT_EQ(adv[t], r[t] - v[t]);
}

TEST(Gae, MonteCarloLimitGivesSuffixSums) {
  const std::vector<double> r{1.0, 2.0, 3.0, 4.0}, v(4, 0.0), boot(4, 0.0);
  const std::vector<std::uint8_t> d{0, 0, 0, 1};
  std::vector<double> adv(4), ret(4);
  gae_segment(r, v, d, boot, 0.0, 1.0, 1.0, adv, ret);
  EXPECT_EQ(adv, (std::vector<double>{10.0, 9.0, 7.0, 4.0}));
  EXPECT_EQ(ret, adv);
}

TEST(Gae, BufferNormalizationAndFloor) {
  RolloutBuffer buf(2, 5, 1, 1);
  std::mt19937_64 rng(1);
  for (int i = 0; i < buf.size(); ++i) {
    buf.rewards[i] = uniform(rng, -1, 1);
    buf.values[i] = uniform(rng, -1, 1);
  }
  buf.last_values.setZero();
  compute_gae(buf, 0.99, 0.95, true);
  EXPECT_NEAR(buf.advantages.mean(), 0.0, 1e-12);
  const double sd = std::sqrt((buf.advantages.array() - buf.advantages.mean()).square().mean());
  EXPECT_NEAR(sd, 1.0, 1e-6);
  EXPECT_TRUE(buf.advantages.allFinite());

  // With the floor at +inf-like 0 every negative reward counts as 0.
  RolloutBuffer a = buf, b = buf;
  for (int i = 0; i < b.size(); ++i) b.rewards[i] = std::max(0.0, b.rewards[i]);
  compute_gae(a, 0.99, 0.95, false, 0.0);
  compute_gae(b, 0.99, 0.95, false);
  EXPECT_EQ(a.advantages, b.advantages);
  EXPECT_EQ(a.rewards, buf.rewards);
}

TEST(LrSchedule, LinearDecayWithFloor) {
  PPOConfig c;
  EXPECT_EQ(lr_at(0, c), 3e-4);
  EXPECT_EQ(lr_at(1500, c), 1e-6);
  EXPECT_EQ(lr_at(4000, c), 1e-6);
  EXPECT_DOUBLE_EQ(lr_at(750, c), 1.5e-4);
  for (int e = 1; e < 1600; ++e) EXPECT_LE(lr_at(e, c), lr_at(e - 1, c));
}

TEST(Surrogate, ScalarOracle) {
  EXPECT_EQ(clipped_surrogate(1.0, 2.0, 0.2), 2.0);
  EXPECT_NEAR(clipped_surrogate(1.5, 2.0, 0.2), 2.4, 1e-12);    // clipped at 1.2
  EXPECT_NEAR(clipped_surrogate(1.5, -2.0, 0.2), -3.0, 1e-12);  // unclipped side
  EXPECT_NEAR(clipped_surrogate(0.5, -2.0, 0.2), -1.6, 1e-12);  // clipped at 0.8
  EXPECT_NEAR(clipped_surrogate(0.5, 2.0, 0.2), 1.0, 1e-12);
  // Single 1-D transition: rho from two Gaussian log-densities.
  nn::GaussianHead head(1, std::log(0.5));
  const Eigen::VectorXd a = Eigen::VectorXd::Constant(1, 0.3);
  const double old_lp = head.log_prob(Eigen::VectorXd::Constant(1, 0.0), a);
  const double new_lp = head.log_prob(Eigen::VectorXd::Constant(1, 0.1), a);
  // (0.3^2 - 0.2^2) / (2 * 0.25) = 0.1
  const double rho = std::exp(new_lp - old_lp);
  EXPECT_NEAR(rho, std::exp(0.1), 1e-12);
  EXPECT_NEAR(clipped_surrogate(rho, 0.7, 0.2), 0.7 * std::exp(0.1), 1e-12);
}

TEST(SymmetryRatio, Counts) {
  EXPECT_EQ(symmetry_ratio(500, 500).ratio, 1.0);
  EXPECT_EQ(symmetry_ratio(600, 400).ratio, 1.5);
  const SymmetryCounts z = symmetry_ratio(3, 0);
  EXPECT_TRUE(z.right_is_zero);
  EXPECT_TRUE(std::isinf(z.ratio));
  std::vector<std::int8_t> sides{1, 1, -1, 0, 0, 1, -1};
  const SymmetryCounts s = symmetry_ratio(sides);
  EXPECT_EQ(s.left, 3);
  EXPECT_EQ(s.right, 2);
  EXPECT_EQ(command_side(0.0), 0);
  EXPECT_EQ(command_side(-1e-9), -1);
}

TEST(SymmetryRatio, MirroredCommandsGiveReciprocal) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::int8_t> sides, mirrored;
    const int n = 1 + static_cast<int>(rng() % 1000);
    for (int k = 0; k < n; ++k) {
      const double vy = uniform(rng, -2, 2) * (rng() % 7 == 0 ? 0.0 : 1.0);
      sides.push_back(command_side(vy));
      mirrored.push_back(command_side(-vy));
    }
    const SymmetryCounts a = symmetry_ratio(sides), b = symmetry_ratio(mirrored);
    if (a.left == 0 || a.right == 0) continue;
    EXPECT_EQ(b.ratio, static_cast<double>(a.right) / static_cast<double>(a.left));
    EXPECT_NEAR(a.ratio * b.ratio, 1.0, 1e-15);
  }
}

// Synthetic one-step buffer: observation 1, action 1.
RolloutBuffer bandit_buffer(const nn::Policy& policy, int n, std::mt19937_64& rng,
                            double optimum) {
  RolloutBuffer buf(n, 1, 1, 1);
  const Eigen::VectorXd obs = Eigen::VectorXd::Ones(1);
  const Eigen::VectorXd mean = policy.mean(obs);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd a = policy.head.sample(mean, rng);
    buf.obs.col(i) = obs;
    buf.actions.col(i) = a;
    buf.log_probs[i] = policy.head.log_prob(mean, a);
    buf.rewards[i] = -(a[0] - optimum) * (a[0] - optimum);
    buf.values[i] = 0.0;
    buf.dones[i] = 1;
  }
  buf.last_values.setZero();
  return buf;
}

TEST(Update, ZeroAdvantagesLeavePolicyAndKlAtZero) {
  nn::Policy policy;
  std::mt19937_64 rng(2);
  policy.net = testing::random_net(rng, {1, 4, 1});
  policy.head = nn::GaussianHead(1, -0.5);
  nn::ValueFunction value;
  value.net = testing::random_net(rng, {1, 4, 1});
  RolloutBuffer buf = bandit_buffer(policy, 64, rng, 0.0);
  buf.advantages = Eigen::VectorXd::Zero(buf.size());
  buf.returns = Eigen::VectorXd::Ones(buf.size());
  PPOConfig cfg;
  cfg.entropy_coef = 0.0;
  Optimizers opt;
  const Eigen::VectorXd before = policy_parameters(policy);
  const Eigen::VectorXd value_before = value.net.parameters();
  const UpdateStats s = update(policy, value, opt, buf, cfg, 0, rng);
  EXPECT_EQ(policy_parameters(policy), before);
  EXPECT_EQ(s.approx_kl, 0.0);
  EXPECT_FALSE(s.early_stopped);
  EXPECT_EQ(s.minibatch_steps, cfg.update_epochs * cfg.minibatches);
  EXPECT_NE(value.net.parameters(), value_before);
}

TEST(Update, EarlyStopHaltsAtFirstKlExcess) {
  nn::Policy policy;
  std::mt19937_64 rng(3);
  policy.net = nn::DenseNet({1, 1});
  policy.head = nn::GaussianHead(1, std::log(0.1));
  nn::ValueFunction value;
  value.net = nn::DenseNet({1, 1});
  RolloutBuffer buf = bandit_buffer(policy, 256, rng, 1.0);
  compute_gae(buf, 0.99, 0.95, true);
  PPOConfig cfg;
  cfg.lr_init = 0.05;  // large steps so the KL limit is reached
  cfg.max_grad_norm = 0.0;
  Optimizers opt;
  std::mt19937_64 update_rng(11), replay(11);
  const UpdateStats s = update(policy, value, opt, buf, cfg, 0, update_rng);
  ASSERT_TRUE(s.early_stopped);
  ASSERT_LT(s.minibatch_steps, cfg.update_epochs * cfg.minibatches);
  // Rebuild the minibatch that triggered the stop and measure its KL under
  // the final parameters: the stop happened on a measurement above 0.008.
  const int n = buf.size();
  const int mb = n / cfg.minibatches;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const int pass = s.minibatch_steps / cfg.minibatches;
  for (int p = 0; p <= pass; ++p) std::shuffle(order.begin(), order.end(), replay);
  const int m = s.minibatch_steps % cfg.minibatches;
  double kl = 0.0;
  for (int k = m * mb; k < (m + 1) * mb; ++k) {
    const int i = order[k];
    kl += buf.log_probs[i] -
          policy.head.log_prob(policy.mean(buf.obs.col(i)), buf.actions.col(i));
  }
  EXPECT_GT(kl / mb, cfg.kl_threshold);
}

TEST(Update, AdaptiveModeRescalesLearningRate) {
  nn::Policy policy;
  std::mt19937_64 rng(3);
  policy.net = nn::DenseNet({1, 1});
  policy.head = nn::GaussianHead(1, std::log(0.1));
  nn::ValueFunction value;
  value.net = nn::DenseNet({1, 1});
  RolloutBuffer buf = bandit_buffer(policy, 256, rng, 1.0);
  compute_gae(buf, 0.99, 0.95, true);
  PPOConfig cfg;
  cfg.kl_mode = KlMode::kAdaptiveLr;
  cfg.lr_init = 0.05;
  Optimizers opt;
  const UpdateStats s = update(policy, value, opt, buf, cfg, 0, rng);
  EXPECT_FALSE(s.early_stopped);
  EXPECT_EQ(s.minibatch_steps, cfg.update_epochs * cfg.minibatches);
  EXPECT_LT(opt.lr_scale, 1.0);
}

TEST(Update, NonFiniteLossRollsBack) {
  nn::Policy policy;
  std::mt19937_64 rng(3);
  policy.net = nn::DenseNet({1, 1});
  policy.head = nn::GaussianHead(1, 0.0);
  nn::ValueFunction value;
  value.net = nn::DenseNet({1, 1});
  RolloutBuffer buf = bandit_buffer(policy, 16, rng, 0.0);
  compute_gae(buf, 0.99, 0.95, true);
  buf.returns[3] = std::numeric_limits<double>::infinity();
  Optimizers opt;
  const Eigen::VectorXd before = policy_parameters(policy);
  const UpdateStats s = update(policy, value, opt, buf, PPOConfig{}, 0, rng);
  EXPECT_TRUE(s.aborted);
  EXPECT_EQ(policy_parameters(policy), before);
  EXPECT_EQ(opt.policy.step_count, 0);
}

TEST(Update, OneDimensionalBanditConverges) {
  const double optimum = 0.7;
  nn::Policy policy;
  policy.net = nn::DenseNet({1, 1});
  policy.head = nn::GaussianHead(1, std::log(0.5));
  nn::ValueFunction value;
  value.net = nn::DenseNet({1, 1});
  PPOConfig cfg;
  cfg.lr_init = 3e-3;
  cfg.total_epochs = 100000;
  Optimizers opt;
  std::mt19937_64 rng(21);
  double first_quarter = 0.0, last_quarter = 0.0;
  for (int epoch = 0; epoch < 500; ++epoch) {
    RolloutBuffer buf = bandit_buffer(policy, 256, rng, optimum);
    compute_gae(buf, 0.99, 0.95, true);
    update(policy, value, opt, buf, cfg, epoch, rng);
    const double err = std::abs(policy.mean(Eigen::VectorXd::Ones(1))[0] - optimum);
    if (epoch < 125) first_quarter += err;
    if (epoch >= 375) last_quarter += err;
  }
  EXPECT_LT(last_quarter, first_quarter);
  EXPECT_LT(std::abs(policy.mean(Eigen::VectorXd::Ones(1))[0] - optimum), 0.1);
}

nn::Policy small_policy(std::uint64_t seed) {
  TrainOptions o;
  o.hidden_layers = {16};
  std::mt19937_64 rng(seed);
  return make_policy(o, rng);
}

nn::ValueFunction small_value(std::uint64_t seed) {
  TrainOptions o;
  o.hidden_layers = {16};
  std::mt19937_64 rng(seed);
  make_policy(o, rng);
  return make_value_function(o, rng);
}

env::EnvConfig collect_env() {
  env::EnvConfig c;
  c.randomization.enabled = true;
  c.max_episode_time = 0.5;  // several resets inside one collection
  return c;
}

TEST(Collector, BufferShapeAndTags) {
  auto terrain = std::make_shared<const sim::Terrain>();
  Collector c(collect_env(), terrain, 8, 1);
  const RolloutBuffer b = c.collect(small_policy(1), small_value(1), 40);
  EXPECT_EQ(b.size(), 320);
  EXPECT_EQ(b.obs.cols(), 320);
  EXPECT_EQ(b.actions.rows(), 12);
  EXPECT_EQ(static_cast<int>(b.sides.size()), 320);
  for (int i = 0; i < b.size(); ++i) {
    EXPECT_EQ(b.sides[i], command_side(b.obs(env::kObsCommand + 1, i)));
  }
  EXPECT_GT(c.last_stats().episodes, 0);
}

TEST(Collector, DeterministicAndThreadIndependent) {
  auto terrain = std::make_shared<const sim::Terrain>(sim::Terrain::steps(2));
  Collector a(collect_env(), terrain, 12, 5, 4, 1);
  Collector b(collect_env(), terrain, 12, 5, 4, 3);
  const nn::Policy p = small_policy(2);
  const nn::ValueFunction v = small_value(2);
  for (int round = 0; round < 2; ++round) {
    const RolloutBuffer x = a.collect(p, v, 40);
    const RolloutBuffer y = b.collect(p, v, 40);
    ASSERT_EQ(x.obs, y.obs);
    ASSERT_EQ(x.actions, y.actions);
    ASSERT_EQ(x.rewards, y.rewards);
    ASSERT_EQ(x.dones, y.dones);
    ASSERT_EQ(x.bootstrap, y.bootstrap);
    ASSERT_EQ(x.last_values, y.last_values);
  }
}

TEST(Collector, RewardsMatchReplayedTransitions) {
  auto terrain = std::make_shared<const sim::Terrain>();
  const env::EnvConfig cfg = collect_env();
  Collector a(cfg, terrain, 4, 9, 2);
  Collector replay(cfg, terrain, 4, 9, 2);
  const RolloutBuffer b = a.collect(small_policy(3), small_value(3), 60);
  for (int e = 0; e < 4; ++e) {
    env::Env& env = replay.env(e);
    for (int t = 0; t < b.steps; ++t) {
      const int i = b.index(e, t);
      ASSERT_EQ(env.observation(), env::Observation(b.obs.col(i)));
      const sim::SimState prev = env.state();
      const sim::JointVector last = env.last_action();
      const env::Command cmd = env.command();
      const sim::JointVector act = b.actions.col(i);
      const env::StepResult r = env.step(act);
      const env::RewardTerms terms =
          env::reward_terms(prev, env.state(), r.info.tau, act, last, cmd);
      ASSERT_EQ(b.rewards[i], env::total_reward(terms, cfg.weights));
      ASSERT_EQ(b.dones[i], r.done ? 1 : 0);
      if (r.done) env.reset();
    }
  }
}

TEST(Collector, DeterministicModeUsesPolicyMean) {
  auto terrain = std::make_shared<const sim::Terrain>();
  Collector a(collect_env(), terrain, 2, 4);
  const nn::Policy p = small_policy(4);
  const RolloutBuffer b = a.collect(p, small_value(4), 5, true);
  for (int i = 0; i < b.size(); ++i) {
    ASSERT_EQ(Eigen::VectorXd(b.actions.col(i)), p.mean(b.obs.col(i)));
  }
}

TrainOptions tiny_options(const std::string& dir) {
  TrainOptions o;
  o.epochs = 2;
  o.num_envs = 4;
  o.steps_per_env = 32;
  o.group_size = 2;
  o.hidden_layers = {16, 16};
  o.run_dir = dir;
  o.checkpoint_every = 1;
  o.eval_every = 1;
  o.eval_episodes = 1;
  o.env.max_episode_time = 1.0;
  return o;
}

TEST(Train, SmokeWritesTelemetryAndCheckpoints) {
  testing::TempDir dir;
  const TrainResult r = train(tiny_options(dir.str()));
  ASSERT_EQ(r.records.size(), 2u);
  const std::string telemetry = testing::read_file(dir / "telemetry.csv");
  EXPECT_EQ(telemetry.substr(0, telemetry.find('\n')), kTelemetryHeader);
  EXPECT_EQ(std::count(telemetry.begin(), telemetry.end(), '\n'), 3);
  EXPECT_TRUE(std::filesystem::exists(dir / checkpoint_name(1)));
  EXPECT_TRUE(std::filesystem::exists(dir / checkpoint_name(2)));
  EXPECT_EQ(latest_checkpoint(dir.str()), dir / checkpoint_name(2));
  const auto doc = nn::read_json_file(dir / checkpoint_name(2));
  EXPECT_EQ(doc.at("epoch"), 2);
  EXPECT_EQ(doc.at("seed"), 1);
  EXPECT_EQ(nn::load_policy(dir / checkpoint_name(2)).net, r.policy.net);
  EXPECT_EQ(r.records[1].steps, 2 * 4 * 32);
  EXPECT_LE(r.records[0].left_count + r.records[0].right_count, 128);
}

TEST(Train, SameSeedGivesIdenticalFiles) {
  testing::TempDir a, b;
  TrainOptions oa = tiny_options(a.str()), ob = tiny_options(b.str());
  ob.threads = 2;
  train(oa);
  train(ob);
  for (const char* name : {"telemetry.csv", "eval.csv", "epoch_000002.ckpt"}) {
    EXPECT_EQ(testing::read_file(a / name), testing::read_file(b / name)) << name;
  }
  testing::TempDir c;
  TrainOptions oc = tiny_options(c.str());
  oc.seed = 2;
  train(oc);
  EXPECT_NE(testing::read_file(a / "telemetry.csv"), testing::read_file(c / "telemetry.csv"));
}

TEST(Train, ResumeContinuesEpochCounterAndSchedule) {
  testing::TempDir dir;
  TrainOptions o = tiny_options(dir.str());
  o.ppo.total_epochs = 4;
  train(o);
  o.epochs = 4;
  o.resume = true;
  const TrainResult r = train(o);
  EXPECT_EQ(r.start_epoch, 2);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].epoch, 2);
  EXPECT_EQ(r.records[1].epoch, 3);
  EXPECT_EQ(r.records[0].steps, 3 * 4 * 32);
  // lr_scale stays 1 in early-stop mode, so the schedule alone sets lr.
  EXPECT_DOUBLE_EQ(r.records[0].lr, 3e-4 * 0.5);
  EXPECT_DOUBLE_EQ(r.records[1].lr, 3e-4 * 0.25);
  const auto table = testing::read_file(dir / "telemetry.csv");
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 5);
  // Resuming a finished run does nothing.
  EXPECT_TRUE(train(o).records.empty());
}

TEST(Train, InvalidOptionsAreConfigErrors) {
  testing::TempDir dir;
  TrainOptions o = tiny_options(dir.str());
  o.num_envs = 0;
  EXPECT_THROW(train(o), ConfigError);
  o = tiny_options(dir.str());
  o.ppo.gamma = 1.0;
  EXPECT_THROW(train(o), ConfigError);
}

}  // namespace
}  // namespace quadloco::ppo
