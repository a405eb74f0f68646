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

// Contributions from the four legs and the eight body corners are always
// summed pairwise as (left + right) before combining pairs. Together with
// odd_sin/even_cos this makes the step bitwise equivariant under the x-z
// reflection on flat ground; do not reorder these sums.

#include "quadloco/sim/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace quadloco::sim {

namespace {

struct Wrench {
  Vec3 force = Vec3::Zero();   // world frame
  Vec3 torque = Vec3::Zero();  // body frame, about the base origin
};

Wrench operator+(const Wrench& a, const Wrench& b) {
  return {a.force + b.force, a.torque + b.torque};
}

// Rotation about the body x axis by the abduction angle.
Vec3 abduct(const Vec3& v, double s0, double c0) {
  return {v.x(), v.y() * c0 - v.z() * s0, v.y() * s0 + v.z() * c0};
}

// Penalty force on a probe sphere. With `anchor` non-null the tangential
// force is a spring-damper towards the sticking point; otherwise it is
// viscous. Both are capped by the Coulomb cone.
Vec3 probe_force(const RobotModel& model, const Terrain& terrain,
                 const Vec3& p, const Vec3& v, double radius, Vec3* anchor,
                 bool* anchor_active) {
  const double h = terrain.height(p.x(), p.y());
  const Vec3 n = terrain.normal(p.x(), p.y());
  const double depth = radius - (p.z() - h) * n.z();
  if (!(depth > 0.0)) {
    if (anchor_active != nullptr) *anchor_active = false;
    return Vec3::Zero();
  }
  const double vn = v.dot(n);
  const double fn = std::max(0.0, model.contact_stiffness * depth -
                                      model.contact_damping * vn);
  const Vec3 vt = v - vn * n;
  Vec3 ft;
  if (anchor != nullptr) {
    if (!*anchor_active) {
      *anchor = p;
      *anchor_active = true;
    }
    const Vec3 s = p - *anchor;
    const Vec3 st = s - s.dot(n) * n;
    ft = -model.contact_stiffness * st - model.contact_damping * vt;
  } else {
    ft = -model.contact_damping * vt;
  }
  const double cap = model.friction * fn;
  const double ft_norm = ft.norm();
  if (ft_norm > cap) {
    ft *= cap / ft_norm;
    if (anchor != nullptr) *anchor = p + ft / model.contact_stiffness;
  }
  return fn * n + ft;
}

bool probe_touching(const Terrain& terrain, const Vec3& p, double radius) {
  const double h = terrain.height(p.x(), p.y());
  const Vec3 n = terrain.normal(p.x(), p.y());
  return radius - (p.z() - h) * n.z() > 0.0;
}

}  // namespace

JointVector drive_map(const JointVector& action, const JointVector& theta,
                      const JointVector& theta_dot, const RobotModel& model) {
  JointVector tau;
  for (int i = 0; i < kNumJoints; ++i) {
    const double raw = model.kp * (action[i] + model.theta0[i] - theta[i]) -
                       model.kd * theta_dot[i];
    tau[i] = std::clamp(raw, -model.tau_max, model.tau_max);
  }
  return tau;
}

LegKinematics leg_kinematics(const RobotModel& model, int leg,
                             const JointVector& theta) {
  const double q0 = theta[3 * leg + kAbduction];
  const double q1 = theta[3 * leg + kFlexion];
  const double q2 = theta[3 * leg + kKnee];
  const double s0 = odd_sin(q0);
  const double c0 = even_cos(q0);
  const double s1 = std::sin(q1);
  const double c1 = std::cos(q1);
  const double s12 = std::sin(q1 + q2);
  const double c12 = std::cos(q1 + q2);
  const double l1 = model.thigh_length;
  const double l2 = model.shank_length;
  const double lateral = model.abduction_link * leg_side(leg);
  const Vec3 hip = model.hip_position(leg);

  const Vec3 knee_local(-l1 * s1, lateral, -l1 * c1);
  const Vec3 foot_local(-l1 * s1 - l2 * s12, lateral, -l1 * c1 - l2 * c12);

  LegKinematics k;
  k.knee = hip + abduct(knee_local, s0, c0);
  k.foot = hip + abduct(foot_local, s0, c0);

  auto abduction_column = [&](const Vec3& local) {
    return Vec3(0.0, -local.y() * s0 - local.z() * c0,
                local.y() * c0 - local.z() * s0);
  };
  k.foot_jacobian.col(0) = abduction_column(foot_local);
  k.foot_jacobian.col(1) =
      abduct(Vec3(-l1 * c1 - l2 * c12, 0.0, l1 * s1 + l2 * s12), s0, c0);
  k.foot_jacobian.col(2) = abduct(Vec3(-l2 * c12, 0.0, l2 * s12), s0, c0);
  k.knee_jacobian.col(0) = abduction_column(knee_local);
  k.knee_jacobian.col(1) = abduct(Vec3(-l1 * c1, 0.0, l1 * s1), s0, c0);
  k.knee_jacobian.col(2) = Vec3::Zero();
  return k;
}

std::array<Vec3, 8> body_corners(const RobotModel& model) {
  const Vec3& e = model.body_half_extents;
  std::array<Vec3, 8> corners;
  int i = 0;
  for (double sx : {1.0, -1.0}) {
    for (double sz : {-1.0, 1.0}) {
      corners[i++] = Vec3(sx * e.x(), e.y(), sz * e.z());
      corners[i++] = Vec3(sx * e.x(), -e.y(), sz * e.z());
    }
  }
  return corners;
}

SimState standing_state(const RobotModel& model, const Terrain& terrain,
                        double x, double y, double yaw, double spawn_height) {
  SimState s;
  s.base_position = Vec3(x, y, terrain.height(x, y) + spawn_height);
  s.base_orientation = Quat::from_axis_angle(Vec3::UnitZ(), yaw);
  s.theta = model.theta0;
  s.contact = detect_contacts(model, terrain, s);
  return s;
}

ContactFlags detect_contacts(const RobotModel& model, const Terrain& terrain,
                             const SimState& state) {
  const Mat3 r = state.base_orientation.matrix();
  const Vec3& pos = state.base_position;
  ContactFlags flags;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const LegKinematics k = leg_kinematics(model, leg, state.theta);
    flags.foot[leg] = probe_touching(terrain, pos + r * k.foot, model.foot_radius);
    flags.knee[leg] = probe_touching(terrain, pos + r * k.knee, model.knee_radius);
  }
  for (const Vec3& c : body_corners(model)) {
    if (probe_touching(terrain, pos + r * c, 0.0)) flags.body = true;
  }
  return flags;
}

SimState step(const SimState& state, const JointVector& tau_in,
              const Terrain& terrain, double dt, const RobotModel& model) {
  const Mat3 r = state.base_orientation.matrix();
  const Mat3 rt = r.transpose();
  const Vec3& pos = state.base_position;
  const Vec3& v = state.base_linear_velocity;
  const Vec3& w = state.base_angular_velocity;

  SimState next = state;

  std::array<Wrench, kNumLegs> leg_wrench;
  std::array<Mat3, kNumLegs> leg_stiffness;
  JointVector tau_contact = JointVector::Zero();
  for (int leg = 0; leg < kNumLegs; ++leg) {
    const LegKinematics k = leg_kinematics(model, leg, state.theta);
    const Eigen::Vector3d qd = state.theta_dot.segment<3>(3 * leg);

    const Vec3 foot_vel_body = v + w.cross(k.foot) + k.foot_jacobian * qd;
    const Vec3 foot_force =
        probe_force(model, terrain, pos + r * k.foot, r * foot_vel_body,
                    model.foot_radius, &next.foot_anchor[leg],
                    &next.anchor_active[leg]);
    const Vec3 knee_vel_body = v + w.cross(k.knee) + k.knee_jacobian * qd;
    const Vec3 knee_force =
        probe_force(model, terrain, pos + r * k.knee, r * knee_vel_body,
                    model.knee_radius, nullptr, nullptr);

    const Vec3 foot_force_body = rt * foot_force;
    const Vec3 knee_force_body = rt * knee_force;
    tau_contact.segment<3>(3 * leg) =
        k.foot_jacobian.transpose() * foot_force_body +
        k.knee_jacobian.transpose() * knee_force_body;

    // Touching probes act as isotropic springs between the leg and the
    // ground; their joint-space stiffness is integrated implicitly.
    Mat3 jtj = Mat3::Zero();
    if (!foot_force.isZero(0.0) || next.anchor_active[leg]) {
      jtj += k.foot_jacobian.transpose() * k.foot_jacobian;
    }
    if (!knee_force.isZero(0.0)) {
      jtj += k.knee_jacobian.transpose() * k.knee_jacobian;
    }
    leg_stiffness[leg] = jtj;
    leg_wrench[leg] = Wrench{foot_force, k.foot.cross(foot_force_body)} +
                      Wrench{knee_force, k.knee.cross(knee_force_body)};
  }

  const auto corners = body_corners(model);
  std::array<Wrench, 8> corner_wrench;
  for (int i = 0; i < 8; ++i) {
    const Vec3& c = corners[i];
    const Vec3 f = probe_force(model, terrain, pos + r * c, r * (v + w.cross(c)),
                               0.0, nullptr, nullptr);
    corner_wrench[i] = Wrench{f, c.cross(rt * f)};
  }

  const Wrench legs = (leg_wrench[kFrontLeft] + leg_wrench[kFrontRight]) +
                      (leg_wrench[kRearLeft] + leg_wrench[kRearRight]);
  const Wrench body = ((corner_wrench[0] + corner_wrench[1]) +
                       (corner_wrench[2] + corner_wrench[3])) +
                      ((corner_wrench[4] + corner_wrench[5]) +
                       (corner_wrench[6] + corner_wrench[7]));
  Wrench total = legs + body;
  total.force.z() -= model.body_mass * model.gravity;

  const Vec3 force_body = rt * total.force;
  const Vec3 lin_acc = force_body / model.body_mass - w.cross(v);
  const Vec3 iw = model.body_inertia.cwiseProduct(w);
  const Vec3 ang_acc = (total.torque - w.cross(iw)).cwiseQuotient(model.body_inertia);

  // Linearly implicit joint update: (I + (dt c + dt^2 k) J^T J) dqd = dt f.
  const auto inertia = model.joint_inertia();
  const double implicit_gain =
      dt * model.contact_damping + dt * dt * model.contact_stiffness;
  JointVector qdd;
  for (int leg = 0; leg < kNumLegs; ++leg) {
    Mat3 m = implicit_gain * leg_stiffness[leg];
    Vec3 f;
    for (int j = 0; j < kJointsPerLeg; ++j) {
      const int i = 3 * leg + j;
      m(j, j) += inertia[j];
      f[j] = std::clamp(tau_in[i], -model.tau_max, model.tau_max) + tau_contact[i];
    }
    qdd.segment<3>(3 * leg) = m.inverse() * f;
  }

  next.base_linear_velocity = v + dt * lin_acc;
  next.base_angular_velocity = w + dt * ang_acc;
  next.theta_dot = state.theta_dot + dt * qdd;

  next.base_position = pos + dt * (r * next.base_linear_velocity);
  const Vec3& wn = next.base_angular_velocity;
  const Quat& q = state.base_orientation;
  const Quat qdot = q * Quat{0.0, wn.x(), wn.y(), wn.z()};
  const double h = 0.5 * dt;
  next.base_orientation = Quat{q.w + h * qdot.w, q.x + h * qdot.x,
                               q.y + h * qdot.y, q.z + h * qdot.z}
                              .normalized();
  next.theta = state.theta + dt * next.theta_dot;
  next.sim_time = state.sim_time + dt;
  next.contact = detect_contacts(model, terrain, next);

  if (!next.all_finite()) {
    throw SimulationDiverged("simulation diverged at t = " +
                                 std::to_string(next.sim_time),
                             next);
  }
  return next;
}

}  // namespace quadloco::sim
