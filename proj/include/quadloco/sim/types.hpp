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

#ifndef QUADLOCO_SIM_TYPES_HPP_
#define QUADLOCO_SIM_TYPES_HPP_

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace quadloco::sim {

inline constexpr int kNumLegs = 4;
inline constexpr int kJointsPerLeg = 3;
inline constexpr int kNumJoints = kNumLegs * kJointsPerLeg;

// Leg order. Joints of leg l are 3l (hip abduction), 3l+1 (hip flexion) and
// 3l+2 (knee). Left legs sit at +y in the body frame (x forward, z up).
enum Leg : int { kFrontLeft = 0, kFrontRight = 1, kRearLeft = 2, kRearRight = 3 };

inline constexpr int kAbduction = 0;
inline constexpr int kFlexion = 1;
inline constexpr int kKnee = 2;

inline constexpr int mirror_leg(int leg) { return leg ^ 1; }
inline constexpr double leg_side(int leg) { return (leg & 1) == 0 ? 1.0 : -1.0; }
inline constexpr double leg_fore_aft(int leg) { return leg < 2 ? 1.0 : -1.0; }

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using JointVector = Eigen::Matrix<double, kNumJoints, 1>;

// sin that is exactly odd in floating point, so that mirrored states produce
// bitwise-mirrored trigonometry.
inline double odd_sin(double x) { return x < 0.0 ? -std::sin(-x) : std::sin(x); }
inline double even_cos(double x) { return std::cos(std::fabs(x)); }

// Unit quaternion rotating body-frame vectors into the world frame.
struct Quat {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Quat normalized() const {
    const double n = norm();
    return {w / n, x / n, y / n, z / n};
  }

  // Body -> world rotation matrix.
  Mat3 matrix() const {
    Mat3 r;
    r(0, 0) = 1.0 - 2.0 * (y * y + z * z);
    r(0, 1) = 2.0 * (x * y - w * z);
    r(0, 2) = 2.0 * (x * z + w * y);
    r(1, 0) = 2.0 * (x * y + w * z);
    r(1, 1) = 1.0 - 2.0 * (x * x + z * z);
    r(1, 2) = 2.0 * (y * z - w * x);
    r(2, 0) = 2.0 * (x * z - w * y);
    r(2, 1) = 2.0 * (y * z + w * x);
    r(2, 2) = 1.0 - 2.0 * (x * x + y * y);
    return r;
  }

  static Quat from_axis_angle(const Vec3& axis, double angle) {
    const Vec3 u = axis.normalized();
    const double s = std::sin(0.5 * angle);
    return {std::cos(0.5 * angle), s * u.x(), s * u.y(), s * u.z()};
  }

  // Z-Y-X (yaw, pitch, roll) composition.
  static Quat from_euler(double roll, double pitch, double yaw);

  friend bool operator==(const Quat&, const Quat&) = default;
};

inline Quat operator*(const Quat& a, const Quat& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

inline Quat Quat::from_euler(double roll, double pitch, double yaw) {
  const Quat qx = from_axis_angle(Vec3::UnitX(), roll);
  const Quat qy = from_axis_angle(Vec3::UnitY(), pitch);
  const Quat qz = from_axis_angle(Vec3::UnitZ(), yaw);
  return qz * qy * qx;
}

// Z-Y-X Euler angles; roll is positive when the right side (-y) goes down.
struct Euler {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

inline Euler to_euler(const Quat& q) {
  Euler e;
  e.roll = std::atan2(2.0 * (q.w * q.x + q.y * q.z),
                      1.0 - 2.0 * (q.x * q.x + q.y * q.y));
  const double s = 2.0 * (q.w * q.y - q.z * q.x);
  e.pitch = std::asin(std::clamp(s, -1.0, 1.0));
  e.yaw = std::atan2(2.0 * (q.w * q.z + q.x * q.y),
                     1.0 - 2.0 * (q.y * q.y + q.z * q.z));
  return e;
}

}  // namespace quadloco::sim

#endif  // QUADLOCO_SIM_TYPES_HPP_
