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

#ifndef QUADLOCO_NN_GAUSSIAN_HEAD_HPP_
#define QUADLOCO_NN_GAUSSIAN_HEAD_HPP_

#include <random>

#include <Eigen/Dense>

namespace quadloco::nn {

// Diagonal Gaussian with a learnable, state-independent log standard
// deviation: action = mean + exp(log_std) * N(0, I).
class GaussianHead {
 public:
  static constexpr double kMinLogStd = -5.0;
  static constexpr double kMaxLogStd = 2.0;

  GaussianHead() = default;
  explicit GaussianHead(Eigen::Index dim, double init_log_std = 0.0)
      : log_std_(Eigen::VectorXd::Constant(dim, init_log_std)) {}
  explicit GaussianHead(Eigen::VectorXd log_std) : log_std_(std::move(log_std)) {}

  Eigen::Index dim() const { return log_std_.size(); }
  Eigen::VectorXd& log_std() { return log_std_; }
  const Eigen::VectorXd& log_std() const { return log_std_; }

  void clamp() { log_std_ = log_std_.cwiseMax(kMinLogStd).cwiseMin(kMaxLogStd); }

  Eigen::VectorXd sample(const Eigen::Ref<const Eigen::VectorXd>& mean,
                         std::mt19937_64& rng) const;

  double log_prob(const Eigen::Ref<const Eigen::VectorXd>& mean,
                  const Eigen::Ref<const Eigen::VectorXd>& action) const;

  // Gradients of log_prob with respect to the mean and to log_std.
  void log_prob_gradients(const Eigen::Ref<const Eigen::VectorXd>& mean,
                          const Eigen::Ref<const Eigen::VectorXd>& action,
                          Eigen::Ref<Eigen::VectorXd> d_mean,
                          Eigen::Ref<Eigen::VectorXd> d_log_std) const;

  // Differential entropy; its gradient w.r.t. every log_std entry is 1.
  double entropy() const;

 private:
  Eigen::VectorXd log_std_;
};

}  // namespace quadloco::nn

#endif  // QUADLOCO_NN_GAUSSIAN_HEAD_HPP_
