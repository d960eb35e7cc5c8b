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

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "common/json_util.hpp"
#include "kinematics/se3.hpp"

namespace wheelarm::kin {

inline constexpr const char* kChainFormat = "wheelarm-chain/1";

using JointVector = Eigen::VectorXd;
using Jacobian = Eigen::Matrix<double, 6, Eigen::Dynamic>;

struct JointLimit {
  double min = 0.0;
  double max = 0.0;
};

// Serial chain in body-frame product-of-exponentials form:
// T(q) = M * exp([B_1] q_1) * ... * exp([B_n] q_n).
struct ChainDescription {
  std::string name;
  std::vector<Vec6> screw_axes;
  RigidTransform home_pose;
  std::vector<JointLimit> joint_limits;

  std::size_t dof() const { return screw_axes.size(); }
  // Throws SchemaError naming the first violated invariant.
  void validate() const;
};

ChainDescription chain_from_json(const Json& doc);
Json chain_to_json(const ChainDescription& chain);
ChainDescription load_chain(const std::filesystem::path& path);
// The shipped Kinova Gen3 description.
ChainDescription default_chain();

RigidTransform poe_fk(const ChainDescription& chain, const JointVector& q);
Jacobian body_jacobian(const ChainDescription& chain, const JointVector& q);

}  // namespace wheelarm::kin
