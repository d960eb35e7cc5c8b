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

// Independent reference computations shared by the unit and acceptance
// tests. Nothing here calls into the library's kinematics code.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace wheelarm::oracle {

using Mat4 = Eigen::Matrix4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

inline Mat4 twist_matrix(const Vec6& xi) {
  Mat4 m = Mat4::Zero();
  m(0, 1) = -xi(2);
  m(0, 2) = xi(1);
  m(1, 0) = xi(2);
  m(1, 2) = -xi(0);
  m(2, 0) = -xi(1);
  m(2, 1) = xi(0);
  m.block<3, 1>(0, 3) = xi.tail<3>();
  return m;
}

// Truncated power series sum_k A^k / k!.
inline Mat4 series_exp(const Mat4& a, int terms = 30) {
  Mat4 sum = Mat4::Identity();
  Mat4 term = Mat4::Identity();
  for (int k = 1; k < terms; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

// FK by multiplying independently computed per-joint exponentials.
inline Mat4 product_fk(const Mat4& home, const std::vector<Vec6>& screws, const Eigen::VectorXd& q) {
  Mat4 t = home;
  for (std::size_t i = 0; i < screws.size(); ++i) t = t * series_exp(twist_matrix(screws[i] * q(i)));
  return t;
}

// Body twist derivative dT/dq_i expressed as T^-1 dT, via central differences
// of the 4x4 matrix.
template <typename Fk>
Eigen::Matrix<double, 6, Eigen::Dynamic> fd_body_jacobian(Fk fk, const Eigen::VectorXd& q, double h = 1e-6) {
  Eigen::Matrix<double, 6, Eigen::Dynamic> j(6, q.size());
  const Mat4 t_inv = fk(q).inverse();
  for (int i = 0; i < q.size(); ++i) {
    Eigen::VectorXd qp = q, qm = q;
    qp(i) += h;
    qm(i) -= h;
    const Mat4 d = t_inv * (fk(qp) - fk(qm)) / (2.0 * h);
    j(0, i) = d(2, 1);
    j(1, i) = d(0, 2);
    j(2, i) = d(1, 0);
    j.block<3, 1>(3, i) = d.block<3, 1>(0, 3);
  }
  return j;
}

// Unicycle integration with `steps` fixed substeps. Forward Euler has a
// global position error of about |v w| dt^2 / (2 steps), fine for dt <= 0.1;
// longer horizons use the midpoint rule.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

inline Pose2 euler_unicycle(Pose2 p, double v, double w, double dt, int steps = 10000) {
  const double h = dt / steps;
  for (int i = 0; i < steps; ++i) {
    p.x += v * std::cos(p.theta) * h;
    p.y += v * std::sin(p.theta) * h;
    p.theta += w * h;
  }
  return p;
}

inline Pose2 midpoint_unicycle(Pose2 p, double v, double w, double dt, int steps = 10000) {
  const double h = dt / steps;
  for (int i = 0; i < steps; ++i) {
    const double mid = p.theta + 0.5 * w * h;
    p.x += v * std::cos(mid) * h;
    p.y += v * std::sin(mid) * h;
    p.theta += w * h;
  }
  return p;
}

// Spherical linear interpolation of unit quaternions (x, y, z, w).
inline Eigen::Vector4d slerp(const Eigen::Vector4d& a, Eigen::Vector4d b, double s) {
  double d = a.dot(b);
  if (d < 0.0) {
    b = -b;
    d = -d;
  }
  const double omega = std::acos(std::min(1.0, d));
  if (omega < 1e-12) return a;
  return (std::sin((1.0 - s) * omega) * a + std::sin(s * omega) * b) / std::sin(omega);
}

inline Eigen::VectorXd uniform_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

}  // namespace wheelarm::oracle
