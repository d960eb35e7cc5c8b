// Copyright 2026 The WheelArm Authors
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

#include "kinematics/se3.hpp"

#include <cmath>
#include <numbers>

#include "common/error.hpp"

namespace wheelarm::kin {

namespace {

constexpr double kPi = std::numbers::pi;
// Below this angle the trigonometric coefficients switch to Taylor series.
constexpr double kSmallAngle = 1e-4;
// Above pi minus this, so3_log reads the axis from the symmetric part.
constexpr double kNearPi = 1e-3;

}  // namespace

RigidTransform RigidTransform::from_matrix(const Mat4& m) {
  RigidTransform t;
  t.rotation = m.topLeftCorner<3, 3>();
  t.translation = m.topRightCorner<3, 1>();
  return t;
}

RigidTransform RigidTransform::from_translation(const Vec3& p) {
  RigidTransform t;
  t.translation = p;
  return t;
}

RigidTransform RigidTransform::from_rotation(const Mat3& r) {
  RigidTransform t;
  t.rotation = r;
  return t;
}

Mat4 RigidTransform::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform t;
  t.rotation = rotation.transpose();
  t.translation = -(t.rotation * translation);
  return t;
}

bool RigidTransform::is_valid(double tol) const {
  if (!rotation.allFinite() || !translation.allFinite()) return false;
  const double ortho = (rotation.transpose() * rotation - Mat3::Identity()).norm();
  return ortho < tol && std::abs(rotation.determinant() - 1.0) <= tol;
}

RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
  RigidTransform t;
  t.rotation = a.rotation * b.rotation;
  t.translation = a.rotation * b.translation + a.translation;
  return t;
}

Twist Twist::from_vector(const Vec6& v) {
  return Twist{v.head<3>(), v.tail<3>()};
}

Vec6 Twist::vector() const {
  Vec6 v;
  v << angular, linear;
  return v;
}

bool is_valid_screw_axis(const Vec6& axis, double tol) {
  if (!axis.allFinite()) return false;
  const double w = axis.head<3>().norm();
  if (w == 0.0) return std::abs(axis.tail<3>().norm() - 1.0) <= tol;
  return std::abs(w - 1.0) <= tol;
}

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Mat6 adjoint(const RigidTransform& t) {
  Mat6 ad = Mat6::Zero();
  ad.topLeftCorner<3, 3>() = t.rotation;
  ad.bottomRightCorner<3, 3>() = t.rotation;
  ad.bottomLeftCorner<3, 3>() = skew(t.translation) * t.rotation;
  return ad;
}

Mat3 so3_exp(const Vec3& w) {
  const double theta2 = w.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a;  // sin(t)/t
  double b;  // (1 - cos(t))/t^2
  if (theta < kSmallAngle) {
    a = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Mat3 k = skew(w);
  return Mat3::Identity() + a * k + b * k * k;
}

Vec3 so3_log(const Mat3& r) {
  const double cos_theta = std::clamp((r.trace() - 1.0) * 0.5, -1.0, 1.0);
  const Vec3 antisym(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  // acos loses half the digits near 0 and pi; atan2 does not.
  const double theta = std::atan2(0.5 * antisym.norm(), cos_theta);

  if (theta < kSmallAngle) {
    // theta/(2 sin theta) to second order.
    return (0.5 + theta * theta / 12.0) * antisym;
  }
  if (kPi - theta > kNearPi) {
    return theta / (2.0 * std::sin(theta)) * antisym;
  }

  // Near pi: (R + R^T)/2 - cos(theta) I = (1 - cos(theta)) w w^T. Take the
  // column with the largest diagonal entry for the axis.
  const Mat3 sym = 0.5 * (r + r.transpose()) - cos_theta * Mat3::Identity();
  int k = 0;
  sym.diagonal().maxCoeff(&k);
  Vec3 axis = sym.col(k) / std::sqrt(std::max(sym(k, k), 1e-300));
  axis.normalize();
  // The antisymmetric part fixes the sign when theta < pi; at exactly pi both
  // signs are valid and the largest component is kept positive.
  if (antisym.dot(axis) < 0.0) axis = -axis;
  return theta * axis;
}

RigidTransform se3_exp(const Twist& xi) {
  const Vec3& w = xi.angular;
  const double theta2 = w.squaredNorm();
  const double theta = std::sqrt(theta2);
  RigidTransform t;
  t.rotation = so3_exp(w);
  if (theta2 == 0.0) {
    t.translation = xi.linear;
    return t;
  }
  double b;  // (1 - cos t)/t^2
  double c;  // (t - sin t)/t^3
  if (theta < kSmallAngle) {
    b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
    c = 1.0 / 6.0 - theta2 / 120.0 + theta2 * theta2 / 5040.0;
  } else {
    b = (1.0 - std::cos(theta)) / theta2;
    c = (theta - std::sin(theta)) / (theta2 * theta);
  }
  const Mat3 k = skew(w);
  t.translation = (Mat3::Identity() + b * k + c * k * k) * xi.linear;
  return t;
}

Twist se3_log(const RigidTransform& t) {
  const double ortho = (t.rotation.transpose() * t.rotation - Mat3::Identity()).norm();
  const double det = t.rotation.determinant();
  if (!(ortho <= 1e-6) || !(std::abs(det - 1.0) <= 1e-6) || !t.translation.allFinite()) {
    fail(ErrorCode::kNonOrthogonalInput,
         "se3_log: rotation is not in SO(3) (|R^T R - I| = " + std::to_string(ortho) +
             ", det = " + std::to_string(det) + ")");
  }
  Twist xi;
  xi.angular = so3_log(t.rotation);
  const double theta2 = xi.angular.squaredNorm();
  if (theta2 == 0.0) {
    xi.linear = t.translation;
    return xi;
  }
  const double theta = std::sqrt(theta2);
  double d;  // (1 - (t/2) cot(t/2)) / t^2
  if (theta < kSmallAngle) {
    d = 1.0 / 12.0 + theta2 / 720.0;
  } else {
    const double half = 0.5 * theta;
    d = (1.0 - half * std::cos(half) / std::sin(half)) / theta2;
  }
  const Mat3 k = skew(xi.angular);
  xi.linear = (Mat3::Identity() - 0.5 * k + d * k * k) * t.translation;
  return xi;
}

Vec4 rotation_to_quat_xyzw(const Mat3& r) {
  Eigen::Quaterniond q(r);
  q.normalize();
  // Canonical hemisphere: w >= 0.
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return Vec4(q.x(), q.y(), q.z(), q.w());
}

Mat3 quat_xyzw_to_rotation(const Vec4& q) {
  Eigen::Quaterniond quat(q[3], q[0], q[1], q[2]);
  quat.normalize();
  return quat.toRotationMatrix();
}

Mat3 rotation_about(int axis, double angle) {
  Vec3 w = Vec3::Zero();
  w[axis] = angle;
  return so3_exp(w);
}

double yaw_of(const Mat3& r) { return std::atan2(r(1, 0), r(0, 0)); }

}  // namespace wheelarm::kin
