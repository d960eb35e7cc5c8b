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

#include "kinematics/ik.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

namespace wheelarm::kin {

Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& j, double damping) {
  if (damping > 0.0) {
    const Eigen::MatrixXd jjt = j * j.transpose() +
                                damping * damping * Eigen::MatrixXd::Identity(j.rows(), j.rows());
    return j.transpose() * jjt.ldlt().solve(Eigen::MatrixXd::Identity(j.rows(), j.rows()));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? 1e-8 * s.maxCoeff() : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff && s[i] > 0.0) inv[i] = 1.0 / s[i];
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double wrap_angle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  if (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

IkSolution ik_newton_raphson(const ChainDescription& chain, const RigidTransform& target,
                             const JointVector& q0, const IkOptions& options) {
  if (static_cast<std::size_t>(q0.size()) != chain.dof()) {
    fail(ErrorCode::kDimensionMismatch, "initial guess has " + std::to_string(q0.size()) +
                                            " joints, chain has " + std::to_string(chain.dof()));
  }
  if (!(options.tolerance > 0.0) || options.max_iterations < 1) {
    fail(ErrorCode::kInvalidArgument, "ik: tolerance must be > 0 and max_iterations >= 1");
  }
  if (!target.is_valid(1e-6)) fail(ErrorCode::kNonOrthogonalInput, "ik: target is not a rigid transform");

  JointVector q = q0;
  int iterations = 0;
  double residual = 0.0;
  while (true) {
    const Twist error = se3_log(poe_fk(chain, q).inverse() * target);
    residual = error.norm();
    if (residual < options.tolerance) break;
    if (iterations >= options.max_iterations || !std::isfinite(residual)) {
      throw IkError(ErrorCode::kMaxIterationsExceeded,
                    "ik: no convergence after " + std::to_string(iterations) +
                        " iterations (residual " + std::to_string(residual) + ")",
                    residual, iterations);
    }
    const Jacobian j = body_jacobian(chain, q);
    double damping = options.damping;
    if (damping == 0.0) {
      const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(j).singularValues();
      if (s.size() == 0 || s.minCoeff() < options.singular_threshold) damping = options.fallback_damping;
    }
    q += pseudoinverse(j, damping) * error.vector();
    ++iterations;
  }

  for (std::size_t i = 0; i < chain.dof(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    if (is_revolute(chain.screw_axes[i])) q[k] = wrap_angle(q[k]);
  }
  for (std::size_t i = 0; i < chain.dof(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const JointLimit& lim = chain.joint_limits[i];
    if (q[k] < lim.min || q[k] > lim.max) {
      std::ostringstream msg;
      msg << "ik: joint " << i << " = " << q[k] << " outside [" << lim.min << ", " << lim.max << "]";
      throw IkError(ErrorCode::kJointLimitViolation, msg.str(), residual, iterations);
    }
  }
  return IkSolution{q, iterations, residual};
}

}  // namespace wheelarm::kin
