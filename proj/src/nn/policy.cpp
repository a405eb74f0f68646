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

#include "quadloco/nn/policy.hpp"

#include "quadloco/error.hpp"

namespace quadloco::nn {

namespace {

Vector apply_scale(const Vector& scale, const Eigen::Ref<const Vector>& obs) {
  if (scale.size() == 0) return obs;
  if (scale.size() != obs.size()) {
    throw ShapeError("observation size does not match the input scale");
  }
  return obs.cwiseProduct(scale);
}

Matrix apply_scale_batch(const Vector& scale,
                         const Eigen::Ref<const Matrix>& obs) {
  if (scale.size() == 0) return obs;
  if (scale.size() != obs.rows()) {
    throw ShapeError("observation rows do not match the input scale");
  }
  return scale.asDiagonal() * obs;
}

}  // namespace

Vector Policy::scaled(const Eigen::Ref<const Vector>& obs) const {
  return apply_scale(input_scale, obs);
}

Matrix Policy::scaled_batch(const Eigen::Ref<const Matrix>& obs) const {
  return apply_scale_batch(input_scale, obs);
}

Matrix ValueFunction::scaled_batch(const Eigen::Ref<const Matrix>& obs) const {
  return apply_scale_batch(input_scale, obs);
}

double ValueFunction::value(const Eigen::Ref<const Vector>& obs) const {
  return net.forward(apply_scale(input_scale, obs))[0];
}

Vector ValueFunction::value_batch(const Eigen::Ref<const Matrix>& obs) const {
  return net.forward_batch(apply_scale_batch(input_scale, obs)).row(0).transpose();
}

}  // namespace quadloco::nn
