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
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "quadloco/error.hpp"
#include "quadloco/nn/adam.hpp"
#include "quadloco/nn/checkpoint.hpp"
#include "quadloco/nn/dense_net.hpp"
#include "quadloco/nn/gaussian_head.hpp"
#include "quadloco/nn/policy.hpp"

namespace quadloco::nn {
namespace {

using testing::random_net;
using testing::uniform;

TEST(Elu, Values) {
  EXPECT_EQ(elu(2.0), 2.0);
  EXPECT_EQ(elu(0.0), 0.0);
  // exp(-1) - 1 evaluated to 30 digits: -0.632120558828557678404476229839.
  EXPECT_NEAR(elu(-1.0), -0.6321205588285577, 1e-16);
}

TEST(Elu, ContinuouslyDifferentiableAtZero) {
  EXPECT_EQ(elu_derivative(0.0), 1.0);
  EXPECT_EQ(elu_derivative(1e-300), 1.0);
  EXPECT_NEAR(elu_derivative(-1e-12), 1.0, 1e-11);
  EXPECT_NEAR((elu(1e-8) - elu(-1e-8)) / 2e-8, 1.0, 1e-7);
}

TEST(DenseNet, RejectsInvalidLayouts) {
  EXPECT_THROW(DenseNet({4}), ShapeError);
  EXPECT_THROW(DenseNet({4, 0, 3}), ShapeError);
  DenseNet net({4, 3});
  EXPECT_THROW(net.forward(Vector::Zero(5)), ShapeError);
}

TEST(DenseNet, ParameterLayoutChains) {
  DenseNet net({5, 7, 3});
  EXPECT_EQ(net.num_parameters(), 5 * 7 + 7 + 7 * 3 + 3);
  EXPECT_EQ(net.weight(0).rows(), 7);
  EXPECT_EQ(net.weight(0).cols(), 5);
  EXPECT_EQ(net.weight(1).rows(), 3);
  EXPECT_EQ(net.weight(1).cols(), 7);
  EXPECT_EQ(net.forward(Vector::Ones(5)).size(), 3);
}

TEST(DenseNet, ZeroWeightsGiveOutputBias) {
  DenseNet net({4, 6, 3});
  net.bias(1) << 0.5, -1.0, 2.0;
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const Vector x = Vector::NullaryExpr(4, [&] { return uniform(rng, -5, 5); });
    EXPECT_EQ(net.forward(x), net.bias(1));
  }
}

TEST(DenseNet, IdentityLinearLayer) {
  DenseNet net({3, 3});
  net.weight(0).setIdentity();
  const Vector x = Vector::LinSpaced(3, -1.0, 2.0);
  EXPECT_EQ(net.forward(x), x);
}

TEST(DenseNet, ForwardMatchesHandRolledOracle) {
  std::mt19937_64 rng(42);
  const DenseNet net = random_net(rng, {4, 8, 3});
  const Vector x = Vector::NullaryExpr(4, [&] { return uniform(rng, -1, 1); });
  // Scalar loops over the raw parameter vector.
  const Vector& p = net.parameters();
  double h[8];
  for (int i = 0; i < 8; ++i) {
    double s = p[32 + i];
    for (int j = 0; j < 4; ++j) s += p[j * 8 + i] * x[j];
    h[i] = s > 0 ? s : std::exp(s) - 1.0;
  }
  const Vector y = net.forward(x);
  for (int i = 0; i < 3; ++i) {
    double s = p[40 + 24 + i];
    for (int j = 0; j < 8; ++j) s += p[40 + j * 3 + i] * h[j];
    EXPECT_NEAR(y[i], s, 1e-12);
  }
}

TEST(DenseNet, BatchMatchesSingleAndIsDeterministic) {
  std::mt19937_64 rng(5);
  const DenseNet net = random_net(rng, {6, 9, 9, 2});
  Matrix x(6, 5);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = uniform(rng, -2, 2);
  const Matrix y = net.forward_batch(x);
  for (int c = 0; c < 5; ++c) {
    const Vector single = net.forward(x.col(c));
    EXPECT_LT((single - y.col(c)).cwiseAbs().maxCoeff(), 1e-14);
  }
  EXPECT_EQ(net.forward_batch(x), y);
}

TEST(DenseNet, LinearGradientRowEqualsInput) {
  DenseNet net({3, 2});
  const Vector x = Vector::LinSpaced(3, 0.5, 1.5);
  Vector up = Vector::Zero(2);
  up[0] = 1.0;
  const auto g = net.backward(x, up);
  // W is 2x3 column-major: entry (0, j) sits at j * 2.
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(g.params[j * 2], x[j]);
    EXPECT_EQ(g.params[j * 2 + 1], 0.0);
  }
  EXPECT_EQ(g.params[6], 1.0);
  EXPECT_EQ(g.params[7], 0.0);
}

TEST(DenseNet, ZeroUpstreamGivesZeroGradient) {
  std::mt19937_64 rng(8);
  const DenseNet net = random_net(rng, {5, 7, 4});
  const auto g = net.backward(Vector::Ones(5), Vector::Zero(4));
  EXPECT_EQ(g.params.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(g.input.cwiseAbs().maxCoeff(), 0.0);
}

// Central differences with h = 1e-5 on 20 random nets with layers <= 16.
TEST(DenseNet, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> width(1, 16), depth(2, 4);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> sizes(depth(rng) + 1);
    for (int& s : sizes) s = width(rng);
    DenseNet net = random_net(rng, sizes, 0.8);
    const Vector x = Vector::NullaryExpr(sizes.front(), [&] { return uniform(rng, -1, 1); });
    const Vector up = Vector::NullaryExpr(sizes.back(), [&] { return uniform(rng, -1, 1); });
    const auto g = net.backward(x, up);
    const double h = 1e-5;
    for (Eigen::Index i = 0; i < net.num_parameters(); ++i) {
      const double saved = net.parameters()[i];
      net.parameters()[i] = saved + h;
      const double fp = up.dot(net.forward(x));
      net.parameters()[i] = saved - h;
      const double fm = up.dot(net.forward(x));
      net.parameters()[i] = saved;
      const double fd = (fp - fm) / (2 * h);
      const double err = std::abs(fd - g.params[i]) / std::max(1.0, std::abs(fd));
      worst = std::max(worst, err);
    }
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      Vector xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const double fd = (up.dot(net.forward(xp)) - up.dot(net.forward(xm))) / (2 * h);
      worst = std::max(worst, std::abs(fd - g.input(j, 0)) / std::max(1.0, std::abs(fd)));
    }
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(DenseNet, OrthogonalInitHasOrthonormalRows) {
  std::mt19937_64 rng(1);
  const DenseNet net = DenseNet::orthogonal({10, 6, 3}, rng, 1.0, 0.01);
  const Matrix w = net.weight(0);
  EXPECT_LT((w * w.transpose() - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-12);
  const Matrix o = net.weight(1) / 0.01;
  EXPECT_LT((o * o.transpose() - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(net.bias(0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  Vector p = Vector::LinSpaced(4, -1, 1);
  const Vector before = p;
  AdamState s = AdamState::for_size(4);
  adam_step(p, Vector::Zero(4), s, 1e-3);
  EXPECT_EQ(p, before);
  EXPECT_EQ(s.step_count, 1);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  for (double g : {3.0, -0.02, 1e-3}) {
    Vector p(1);
    p << 1.0;
    AdamState s = AdamState::for_size(1);
    adam_step(p, Vector::Constant(1, g), s, 0.1);
    // m_hat / (sqrt(v_hat) + eps) = g / (|g| + eps).
    EXPECT_NEAR(p[0], 1.0 - 0.1 * g / (std::abs(g) + 1e-8), 1e-15);
    EXPECT_NEAR(1.0 - p[0], 0.1 * (g > 0 ? 1 : -1), 1e-6);
  }
}

TEST(Adam, MatchesScalarOracle) {
  std::mt19937_64 rng(9);
  const int n = 7;
  Vector p = Vector::NullaryExpr(n, [&] { return uniform(rng, -1, 1); });
  std::vector<double> q(p.data(), p.data() + n), m(n, 0.0), v(n, 0.0);
  AdamState s = AdamState::for_size(n);
  for (int step = 1; step <= 5; ++step) {
    const Vector g = Vector::NullaryExpr(n, [&] { return uniform(rng, -2, 2); });
    adam_step(p, g, s, 0.01);
    for (int i = 0; i < n; ++i) {
      m[i] = 0.9 * m[i] + 0.1 * g[i];
      v[i] = 0.999 * v[i] + 0.001 * g[i] * g[i];
      const double mh = m[i] / (1.0 - std::pow(0.9, step));
      const double vh = v[i] / (1.0 - std::pow(0.999, step));
      q[i] -= 0.01 * mh / (std::sqrt(vh) + 1e-8);
    }
    EXPECT_EQ(s.step_count, step);
  }
  for (int i = 0; i < n; ++i) EXPECT_NEAR(p[i], q[i], 1e-12);
}

TEST(Adam, RejectsNonFiniteGradientWithoutSideEffects) {
  Vector p = Vector::Ones(3);
  AdamState s = AdamState::for_size(3);
  Vector g = Vector::Ones(3);
  g[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(adam_step(p, g, s, 0.1), NumericError);
  EXPECT_EQ(s.step_count, 0);
  EXPECT_EQ(p, Vector::Ones(3));
}

TEST(GaussianHead, LogProbMatchesFormula) {
  GaussianHead head(Vector::LinSpaced(3, -1.0, 0.5));
  const Vector mean = Vector::LinSpaced(3, 0.1, 0.3);
  const Vector a = Vector::LinSpaced(3, -0.4, 1.2);
  double expected = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double sd = std::exp(head.log_std()[i]);
    const double z = (a[i] - mean[i]) / sd;
    expected += -0.5 * z * z - head.log_std()[i] - 0.5 * std::log(2 * M_PI);
  }
  EXPECT_NEAR(head.log_prob(mean, a), expected, 1e-12);
}

TEST(GaussianHead, DensityIntegratesToOne) {
  GaussianHead head(1, std::log(0.7));
  const Vector mean = Vector::Constant(1, 0.3);
  double integral = 0.0;
  const double dx = 1e-3;
  for (double x = -10; x <= 10; x += dx) {
    integral += std::exp(head.log_prob(mean, Vector::Constant(1, x))) * dx;
  }
  EXPECT_NEAR(integral, 1.0, 1e-3);
}

TEST(GaussianHead, SampleIsMeanPlusScaledNoise) {
  GaussianHead head(Vector::Constant(2, std::log(0.5)));
  const Vector mean = Vector::Constant(2, 1.0);
  std::mt19937_64 a(77), b(77);
  const Vector s = head.sample(mean, a);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double n0 = normal(b);
  const double n1 = normal(b);
  EXPECT_NEAR(s[0], 1.0 + 0.5 * n0, 1e-15);
  EXPECT_NEAR(s[1], 1.0 + 0.5 * n1, 1e-15);
  EXPECT_TRUE(std::isfinite(head.log_prob(mean, s)));
}

TEST(GaussianHead, LogProbGradientsMatchFiniteDifferences) {
  GaussianHead head(Vector::LinSpaced(4, -0.5, 0.2));
  const Vector mean = Vector::LinSpaced(4, -1, 1);
  const Vector a = Vector::LinSpaced(4, 0.3, -0.2);
  Vector dm(4), ds(4);
  head.log_prob_gradients(mean, a, dm, ds);
  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    Vector mp = mean, mm = mean;
    mp[i] += h;
    mm[i] -= h;
    EXPECT_NEAR(dm[i], (head.log_prob(mp, a) - head.log_prob(mm, a)) / (2 * h), 1e-6);
    GaussianHead hp = head, hm = head;
    hp.log_std()[i] += h;
    hm.log_std()[i] -= h;
    EXPECT_NEAR(ds[i], (hp.log_prob(mean, a) - hm.log_prob(mean, a)) / (2 * h), 1e-6);
  }
  // Entropy is sum(log_std) + const.
  GaussianHead shifted = head;
  shifted.log_std().array() += 0.25;
  EXPECT_NEAR(shifted.entropy() - head.entropy(), 4 * 0.25, 1e-12);
}

TEST(Base64, Rfc4648Vectors) {
  auto enc = [](std::string s) {
    return base64_encode({reinterpret_cast<const unsigned char*>(s.data()), s.size()});
  };
  EXPECT_EQ(enc(""), "");
  EXPECT_EQ(enc("f"), "Zg==");
  EXPECT_EQ(enc("fo"), "Zm8=");
  EXPECT_EQ(enc("foo"), "Zm9v");
  EXPECT_EQ(enc("foob"), "Zm9vYg==");
  EXPECT_EQ(enc("fooba"), "Zm9vYmE=");
  EXPECT_EQ(enc("foobar"), "Zm9vYmFy");
  const auto back = base64_decode("Zm9vYmFy");
  EXPECT_EQ(std::string(back.begin(), back.end()), "foobar");
  EXPECT_THROW(base64_decode("Zm9"), IoError);
  EXPECT_THROW(base64_decode("Zm9v!!!!"), IoError);
}

TEST(Checkpoint, PolicyRoundTripIsBitExact) {
  std::mt19937_64 rng(12);
  Policy p;
  p.net = random_net(rng, {48, 16, 12});
  p.head = GaussianHead(Vector::LinSpaced(12, -2, 0.5));
  p.input_scale = Vector::LinSpaced(48, 0.1, 2.0);
  AdamState adam = AdamState::for_size(p.net.num_parameters() + 12);
  adam.first_moment.setConstant(0.1 / 3.0);
  adam.second_moment.setConstant(std::nextafter(1.0, 2.0));
  adam.step_count = 17;
  const auto doc = policy_to_json(p, &adam);
  const PolicyCheckpoint back = policy_from_json(nlohmann::json::parse(doc.dump()));
  EXPECT_EQ(back.policy.net, p.net);
  EXPECT_EQ(back.policy.head.log_std(), p.head.log_std());
  EXPECT_EQ(back.policy.input_scale, p.input_scale);
  ASSERT_TRUE(back.adam.has_value());
  EXPECT_EQ(back.adam->first_moment, adam.first_moment);
  EXPECT_EQ(back.adam->second_moment, adam.second_moment);
  EXPECT_EQ(back.adam->step_count, 17);
}

TEST(Checkpoint, CorruptDocumentsAreIoErrors) {
  testing::TempDir dir;
  std::ofstream(dir / "junk.ckpt") << "{not json";
  EXPECT_THROW(load_policy(dir / "junk.ckpt"), IoError);
  EXPECT_THROW(load_policy(dir / "missing.ckpt"), IoError);
  std::mt19937_64 rng(1);
  Policy p;
  p.net = random_net(rng, {3, 2});
  p.head = GaussianHead(2);
  auto doc = policy_to_json(p);
  doc["layers"][0]["weight"] = "AAAA";
  EXPECT_THROW(policy_from_json(doc), IoError);
  doc = policy_to_json(p);
  doc["format_version"] = 99;
  EXPECT_THROW(policy_from_json(doc), IoError);
  doc = policy_to_json(p);
  doc.erase("layer_sizes");
  EXPECT_THROW(policy_from_json(doc), IoError);
}

}  // namespace
}  // namespace quadloco::nn
