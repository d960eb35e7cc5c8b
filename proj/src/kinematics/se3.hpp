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

#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace wheelarm::kin {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Homogeneous rigid-body transform in SE(3).
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }
  static RigidTransform from_matrix(const Mat4& m);
  static RigidTransform from_translation(const Vec3& p);
  static RigidTransform from_rotation(const Mat3& r);

  Mat4 matrix() const;
  RigidTransform inverse() const;
  Vec3 apply(const Vec3& point) const { return rotation * point + translation; }

  // Orthogonality and unit determinant within tol.
  bool is_valid(double tol = 1e-9) const;
};

RigidTransform operator*(const RigidTransform& a, const RigidTransform& b);

// Element of se(3): a body velocity or, when integrated over unit time, a
// displacement. Ordering is angular-then-linear throughout the project.
struct Twist {
  Vec3 angular = Vec3::Zero();
  Vec3 linear = Vec3::Zero();

  static Twist from_vector(const Vec6& v);
  Vec6 vector() const;

  // Convergence norm: max(|angular|, |linear|), no unit mixing.
  double norm() const { return std::max(angular.norm(), linear.norm()); }
};

// A screw axis is a unit revolute twist (|angular| = 1) or a unit prismatic
// twist (angular = 0, |linear| = 1).
bool is_valid_screw_axis(const Vec6& axis, double tol = 1e-12);
inline bool is_revolute(const Vec6& axis) { return axis.head<3>().squaredNorm() > 0.0; }

Mat3 skew(const Vec3& v);
Mat6 adjoint(const RigidTransform& t);

Mat3 so3_exp(const Vec3& rotation_vector);
// Returns the rotation vector (axis * angle) with angle in [0, pi].
Vec3 so3_log(const Mat3& r);

RigidTransform se3_exp(const Twist& xi);
// Throws NonOrthogonalInput when the rotation deviates from SO(3) by more
// than 1e-6 in Frobenius norm (or determinant).
Twist se3_log(const RigidTransform& t);

// Quaternions are exchanged as (x, y, z, w) everywhere on disk and in features.
Vec4 rotation_to_quat_xyzw(const Mat3& r);
Mat3 quat_xyzw_to_rotation(const Vec4& q);

Mat3 rotation_about(int axis, double angle);
double yaw_of(const Mat3& r);

}  // namespace wheelarm::kin
