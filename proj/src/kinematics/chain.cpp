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

#include "kinematics/chain.hpp"

#include "common/embedded.hpp"

namespace wheelarm::kin {

namespace {

void check_dof(const ChainDescription& chain, const JointVector& q) {
  if (static_cast<std::size_t>(q.size()) != chain.dof()) {
    fail(ErrorCode::kDimensionMismatch, "joint vector has " + std::to_string(q.size()) +
                                            " entries, chain has " + std::to_string(chain.dof()));
  }
}

}  // namespace

void ChainDescription::validate() const {
  if (screw_axes.empty()) fail(ErrorCode::kSchemaError, "screw_axes: chain needs at least one joint");
  if (joint_limits.size() != screw_axes.size()) {
    fail(ErrorCode::kSchemaError, "joint_limits_rad: expected " + std::to_string(screw_axes.size()) + " rows");
  }
  for (std::size_t i = 0; i < screw_axes.size(); ++i) {
    if (!is_valid_screw_axis(screw_axes[i], 1e-9)) {
      fail(ErrorCode::kSchemaError, "screw_axes[" + std::to_string(i) + "]: not a unit screw axis");
    }
    if (!(joint_limits[i].min < joint_limits[i].max)) {
      fail(ErrorCode::kSchemaError, "joint_limits_rad[" + std::to_string(i) + "]: min must be < max");
    }
  }
  if (!home_pose.is_valid(1e-9)) fail(ErrorCode::kSchemaError, "home_pose: not a rigid transform");
}

ChainDescription chain_from_json(const Json& doc) {
  require_format(doc, kChainFormat, "robot description");
  ChainDescription chain;
  chain.name = doc.value("name", std::string("chain"));

  const Json& axes = require(doc, "screw_axes", "");
  if (!axes.is_array()) fail(ErrorCode::kSchemaError, "screw_axes: expected an array of 6-vectors");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const std::string path = "screw_axes[" + std::to_string(i) + "]";
    if (!axes[i].is_array() || axes[i].size() != 6) fail(ErrorCode::kSchemaError, path + ": expected 6 numbers");
    Vec6 s;
    for (int k = 0; k < 6; ++k) {
      if (!axes[i][k].is_number()) fail(ErrorCode::kSchemaError, path + ": expected 6 numbers");
      s[k] = axes[i][k].get<double>();
    }
    chain.screw_axes.push_back(s);
  }

  const Json& home = require(doc, "home_pose", "");
  if (!home.is_array() || home.size() != 4) fail(ErrorCode::kSchemaError, "home_pose: expected 4x4 rows");
  Mat4 m;
  for (int r = 0; r < 4; ++r) {
    if (!home[r].is_array() || home[r].size() != 4) fail(ErrorCode::kSchemaError, "home_pose: expected 4x4 rows");
    for (int c = 0; c < 4; ++c) {
      if (!home[r][c].is_number()) fail(ErrorCode::kSchemaError, "home_pose: non-numeric entry");
      m(r, c) = home[r][c].get<double>();
    }
  }
  chain.home_pose = RigidTransform::from_matrix(m);

  const Json& limits = require(doc, "joint_limits_rad", "");
  if (!limits.is_array()) fail(ErrorCode::kSchemaError, "joint_limits_rad: expected n x 2 rows");
  for (std::size_t i = 0; i < limits.size(); ++i) {
    if (!limits[i].is_array() || limits[i].size() != 2 || !limits[i][0].is_number() || !limits[i][1].is_number()) {
      fail(ErrorCode::kSchemaError, "joint_limits_rad[" + std::to_string(i) + "]: expected [min, max]");
    }
    chain.joint_limits.push_back({limits[i][0].get<double>(), limits[i][1].get<double>()});
  }
  chain.validate();
  return chain;
}

Json chain_to_json(const ChainDescription& chain) {
  Json doc;
  doc["format"] = kChainFormat;
  doc["name"] = chain.name;
  Json axes = Json::array();
  for (const Vec6& s : chain.screw_axes) axes.push_back(std::vector<double>(s.data(), s.data() + 6));
  doc["screw_axes"] = axes;
  const Mat4 m = chain.home_pose.matrix();
  Json home = Json::array();
  for (int r = 0; r < 4; ++r) home.push_back({m(r, 0), m(r, 1), m(r, 2), m(r, 3)});
  doc["home_pose"] = home;
  Json limits = Json::array();
  for (const JointLimit& l : chain.joint_limits) limits.push_back({l.min, l.max});
  doc["joint_limits_rad"] = limits;
  return doc;
}

ChainDescription load_chain(const std::filesystem::path& path) {
  return chain_from_json(read_json_file(path));
}

ChainDescription default_chain() {
  return chain_from_json(Json::parse(embedded_file("gen3.json")));
}

RigidTransform poe_fk(const ChainDescription& chain, const JointVector& q) {
  check_dof(chain, q);
  RigidTransform t = chain.home_pose;
  for (std::size_t i = 0; i < chain.dof(); ++i) {
    t = t * se3_exp(Twist::from_vector(chain.screw_axes[i] * q[static_cast<Eigen::Index>(i)]));
  }
  return t;
}

Jacobian body_jacobian(const ChainDescription& chain, const JointVector& q) {
  check_dof(chain, q);
  const auto n = static_cast<Eigen::Index>(chain.dof());
  Jacobian j(6, n);
  // Walk from the tip: column i is Ad(exp(-B_n q_n) ... exp(-B_{i+1} q_{i+1})) B_i.
  RigidTransform downstream;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const Vec6& b = chain.screw_axes[static_cast<std::size_t>(i)];
    j.col(i) = adjoint(downstream) * b;
    downstream = downstream * se3_exp(Twist::from_vector(-b * q[i]));
  }
  return j;
}

}  // namespace wheelarm::kin
