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

#include "quadloco/nn/gaussian_head.hpp"

#include <cmath>

#include "quadloco/error.hpp"

namespace quadloco::nn {

namespace {
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * log(2 pi)
}  // namespace

Eigen::VectorXd GaussianHead::sample(
    const Eigen::Ref<const Eigen::VectorXd>& mean, std::mt19937_64& rng) const {
  if (mean.size() != dim()) throw ShapeError("GaussianHead::sample: size mismatch");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd out(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) {
    out[i] = mean[i] + std::exp(log_std_[i]) * normal(rng);
  }
  return out;
}

double GaussianHead::log_prob(
    const Eigen::Ref<const Eigen::VectorXd>& mean,
    const Eigen::Ref<const Eigen::VectorXd>& action) const {
  if (mean.size() != dim() || action.size() != dim()) {
    throw ShapeError("GaussianHead::log_prob: size mismatch");
  }
  double lp = 0.0;
  for (Eigen::Index i = 0; i < dim(); ++i) {
    const double z = (action[i] - mean[i]) * std::exp(-log_std_[i]);
    lp += -0.5 * z * z - log_std_[i] - kHalfLog2Pi;
  }
  return lp;
}

void GaussianHead::log_prob_gradients(
    const Eigen::Ref<const Eigen::VectorXd>& mean,
    const Eigen::Ref<const Eigen::VectorXd>& action,
    Eigen::Ref<Eigen::VectorXd> d_mean,
    Eigen::Ref<Eigen::VectorXd> d_log_std) const {
  for (Eigen::Index i = 0; i < dim(); ++i) {
    const double inv_std = std::exp(-log_std_[i]);
    const double z = (action[i] - mean[i]) * inv_std;
    d_mean[i] = z * inv_std;
    d_log_std[i] = z * z - 1.0;
  }
}

double GaussianHead::entropy() const {
  return (log_std_.array() + 0.5 + kHalfLog2Pi).sum();
}

}  // namespace quadloco::nn
