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

#include "kinematics/chain.hpp"

namespace wheelarm::kin {

// Moore-Penrose pseudoinverse (damping == 0, singular values below
// 1e-8 * sigma_max treated as zero) or damped least squares
// J^T (J J^T + damping^2 I)^-1 (damping > 0).
Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& j, double damping = 0.0);

struct IkOptions {
  double tolerance = 1e-6;
  int max_iterations = 50;
  double damping = 0.0;
  // Used instead of `damping` whenever the smallest singular value of J_b
  // drops below singular_threshold.
  double fallback_damping = 1e-3;
  double singular_threshold = 1e-6;
};

struct IkSolution {
  JointVector q;
  int iterations = 0;  // number of joint updates applied
  double residual = 0.0;
};

// Newton-Raphson on the body error twist:
//   V_b = log(T_sb(q)^-1 T_sd),  q <- q + J_b(q)^+ V_b,  until |V_b| < tol.
// Revolute joints are wrapped to (-pi, pi] before the limit check.
// Throws IkError(MaxIterationsExceeded) or IkError(JointLimitViolation).
IkSolution ik_newton_raphson(const ChainDescription& chain, const RigidTransform& target,
                             const JointVector& q0, const IkOptions& options = {});

// (-pi, pi]
double wrap_angle(double angle);

}  // namespace wheelarm::kin
