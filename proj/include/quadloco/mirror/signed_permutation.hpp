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

#ifndef QUADLOCO_MIRROR_SIGNED_PERMUTATION_HPP_
#define QUADLOCO_MIRROR_SIGNED_PERMUTATION_HPP_

#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace quadloco::mirror {

// y[i] = signs[i] * x[perm[i]].
class SignedPermutation {
 public:
  SignedPermutation() = default;
  // Throws ConfigError unless perm is a bijection and every sign is +-1.
  SignedPermutation(std::vector<int> perm, std::vector<int> signs);

  static SignedPermutation identity(int n);

  int size() const { return static_cast<int>(perm_.size()); }
  const std::vector<int>& perm() const { return perm_; }
  const std::vector<int>& signs() const { return signs_; }

  // Throws ShapeError on a size mismatch.
  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  // Applies the map to every column.
  Eigen::MatrixXd apply_columns(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
  Eigen::MatrixXd matrix() const;

  bool is_involution() const;

  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;

 private:
  std::vector<int> perm_;
  std::vector<int> signs_;
};

struct MirrorMaps {
  SignedPermutation state;   // 48 entries
  SignedPermutation action;  // 12 entries
};

inline constexpr std::string_view kCanonicalLayout = "v,omega,command,attitude,theta,theta_dot,last_action";
inline constexpr std::string_view kCanonicalJoints = "fl,fr,rl,rr";

// Reflection across the body x-z plane for the canonical observation layout
// and leg order. Any other layout or joint convention is a ConfigError.
MirrorMaps build_mirror_maps(std::string_view obs_layout = kCanonicalLayout,
                             std::string_view joint_convention = kCanonicalJoints);

}  // namespace quadloco::mirror

#endif  // QUADLOCO_MIRROR_SIGNED_PERMUTATION_HPP_
