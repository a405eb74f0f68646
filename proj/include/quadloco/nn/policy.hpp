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

#ifndef QUADLOCO_NN_POLICY_HPP_
#define QUADLOCO_NN_POLICY_HPP_

#include <Eigen/Dense>

#include "quadloco/nn/dense_net.hpp"
#include "quadloco/nn/gaussian_head.hpp"

namespace quadloco::nn {

// Stochastic policy: a DenseNet producing the action mean from an
// elementwise-scaled observation, plus a Gaussian exploration head.
//
// input_scale must be invariant under the observation mirror map (paired
// entries share a scale) so that mirroring commutes with the scaling.
struct Policy {
  DenseNet net;
  GaussianHead head;
  Vector input_scale;  // empty means all ones

  Vector scaled(const Eigen::Ref<const Vector>& obs) const;
  Matrix scaled_batch(const Eigen::Ref<const Matrix>& obs) const;

  Vector mean(const Eigen::Ref<const Vector>& obs) const {
    return net.forward(scaled(obs));
  }
  Matrix mean_batch(const Eigen::Ref<const Matrix>& obs) const {
    return net.forward_batch(scaled_batch(obs));
  }
};

// Value function: DenseNet with a single linear output on the same scaled
// input as the policy.
struct ValueFunction {
  DenseNet net;
  Vector input_scale;

  Matrix scaled_batch(const Eigen::Ref<const Matrix>& obs) const;
  double value(const Eigen::Ref<const Vector>& obs) const;
  Vector value_batch(const Eigen::Ref<const Matrix>& obs) const;
};

}  // namespace quadloco::nn

#endif  // QUADLOCO_NN_POLICY_HPP_
