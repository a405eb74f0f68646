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

#include "quadloco/mirror/signed_permutation.hpp"

#include <string>

#include "quadloco/env/observation.hpp"
#include "quadloco/error.hpp"

namespace quadloco::mirror {

SignedPermutation::SignedPermutation(std::vector<int> perm, std::vector<int> signs)
    : perm_(std::move(perm)), signs_(std::move(signs)) {
  const int n = size();
  if (static_cast<int>(signs_.size()) != n) {
    throw ConfigError("signed permutation: perm and signs differ in length");
  }
  std::vector<bool> seen(n, false);
  for (int i = 0; i < n; ++i) {
    if (perm_[i] < 0 || perm_[i] >= n || seen[perm_[i]]) {
      throw ConfigError("signed permutation: perm is not a bijection");
    }
    seen[perm_[i]] = true;
    if (signs_[i] != 1 && signs_[i] != -1) {
      throw ConfigError("signed permutation: signs must be +1 or -1");
    }
  }
}

SignedPermutation SignedPermutation::identity(int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  return SignedPermutation(std::move(perm), std::vector<int>(n, 1));
}

Eigen::VectorXd SignedPermutation::apply(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != size()) {
    throw ShapeError("signed permutation of size " + std::to_string(size()) +
                     " applied to a vector of size " + std::to_string(x.size()));
  }
  Eigen::VectorXd y(size());
  for (int i = 0; i < size(); ++i) {
    y[i] = signs_[i] < 0 ? -x[perm_[i]] : x[perm_[i]];
  }
  return y;
}

Eigen::MatrixXd SignedPermutation::apply_columns(
    const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  if (x.rows() != size()) throw ShapeError("signed permutation: row count mismatch");
  Eigen::MatrixXd y(x.rows(), x.cols());
  for (int i = 0; i < size(); ++i) {
    y.row(i) = signs_[i] < 0 ? Eigen::RowVectorXd(-x.row(perm_[i]))
                             : Eigen::RowVectorXd(x.row(perm_[i]));
  }
  return y;
}

Eigen::MatrixXd SignedPermutation::matrix() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size(), size());
  for (int i = 0; i < size(); ++i) m(i, perm_[i]) = signs_[i];
  return m;
}

bool SignedPermutation::is_involution() const {
  for (int i = 0; i < size(); ++i) {
    const int j = perm_[i];
    if (perm_[j] != i || signs_[i] * signs_[j] != 1) return false;
  }
  return true;
}

namespace {

// Leg swap with abduction negated, for a 12-entry joint block at `offset`.
void joint_block(std::vector<int>& perm, std::vector<int>& signs, int offset) {
  for (int leg = 0; leg < sim::kNumLegs; ++leg) {
    for (int j = 0; j < sim::kJointsPerLeg; ++j) {
      const int i = offset + 3 * leg + j;
      perm[i] = offset + 3 * sim::mirror_leg(leg) + j;
      signs[i] = j == sim::kAbduction ? -1 : 1;
    }
  }
}

void vector_block(std::vector<int>& perm, std::vector<int>& signs, int offset,
                  int sx, int sy, int sz) {
  const int s[3] = {sx, sy, sz};
  for (int k = 0; k < 3; ++k) {
    perm[offset + k] = offset + k;
    signs[offset + k] = s[k];
  }
}

}  // namespace

MirrorMaps build_mirror_maps(std::string_view obs_layout,
                             std::string_view joint_convention) {
  if (obs_layout != kCanonicalLayout) {
    throw ConfigError("mirror: unknown observation layout '" + std::string(obs_layout) + "'");
  }
  if (joint_convention != kCanonicalJoints) {
    throw ConfigError("mirror: unknown joint convention '" +
                      std::string(joint_convention) + "'");
  }
  std::vector<int> perm(env::kObsDim);
  std::vector<int> signs(env::kObsDim);
  vector_block(perm, signs, env::kObsLinearVelocity, 1, -1, 1);
  vector_block(perm, signs, env::kObsAngularVelocity, -1, 1, -1);
  vector_block(perm, signs, env::kObsCommand, 1, -1, -1);
  vector_block(perm, signs, env::kObsAttitude, 1, -1, 1);
  joint_block(perm, signs, env::kObsJointPosition);
  joint_block(perm, signs, env::kObsJointVelocity);
  joint_block(perm, signs, env::kObsLastAction);

  std::vector<int> aperm(env::kActionDim);
  std::vector<int> asigns(env::kActionDim);
  joint_block(aperm, asigns, 0);
  return {SignedPermutation(std::move(perm), std::move(signs)),
          SignedPermutation(std::move(aperm), std::move(asigns))};
}

}  // namespace quadloco::mirror
