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

#include "robot/robot.hpp"

#include <algorithm>
#include <cmath>

#include "common/embedded.hpp"

namespace wheelarm::robot {

namespace {

RigidTransform transform_from_rows(const Json& rows, const std::string& path) {
  if (!rows.is_array() || rows.size() != 4) fail(ErrorCode::kSchemaError, path + ": expected 4x4 rows");
  kin::Mat4 m;
  for (int r = 0; r < 4; ++r) {
    if (!rows[r].is_array() || rows[r].size() != 4) fail(ErrorCode::kSchemaError, path + ": expected 4x4 rows");
    for (int c = 0; c < 4; ++c) {
      if (!rows[r][c].is_number()) fail(ErrorCode::kSchemaError, path + ": non-numeric entry");
      m(r, c) = rows[r][c].get<double>();
    }
  }
  RigidTransform t = RigidTransform::from_matrix(m);
  if (!t.is_valid(1e-9)) fail(ErrorCode::kSchemaError, path + ": not a rigid transform");
  return t;
}

Json transform_rows(const RigidTransform& t) {
  const kin::Mat4 m = t.matrix();
  Json rows = Json::array();
  for (int r = 0; r < 4; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2), m(r, 3)});
  return rows;
}

}  // namespace

void RobotConfig::validate() const {
  if (!(wheel_radius > 0.0)) fail(ErrorCode::kSchemaError, "wheel_radius: must be > 0");
  if (!(track_width > 0.0)) fail(ErrorCode::kSchemaError, "track_width: must be > 0");
  if (!(gripper_min < gripper_max)) fail(ErrorCode::kSchemaError, "gripper_limits_rad: min must be < max");
  if (!(max_linear > 0.0) || !(max_angular > 0.0)) fail(ErrorCode::kSchemaError, "velocity caps must be > 0");
  if (sim_rate_hz <= 0) fail(ErrorCode::kSchemaError, "sim_rate_hz: must be > 0");
  if (rates.joint_states <= 0 || rates.base <= 0 || rates.imu <= 0 || rates.camera <= 0) {
    fail(ErrorCode::kSchemaError, "topic_rates_hz: rates must be > 0");
  }
  if (sim_rate_hz % rates.camera != 0 || sim_rate_hz % rates.joint_states != 0 || sim_rate_hz % rates.base != 0) {
    fail(ErrorCode::kSchemaError, "topic_rates_hz: tick-synchronous rates must divide sim_rate_hz");
  }
  // Jitter must stay below half of the shortest period for stamps to stay ordered.
  const double shortest = 1.0 / std::max({rates.joint_states, rates.base, rates.imu, rates.camera});
  if (timestamp_jitter < 0.0 || timestamp_jitter >= 0.5 * shortest) {
    fail(ErrorCode::kSchemaError, "timestamp_jitter_s: must be in [0, half the shortest period)");
  }
  if (static_cast<std::size_t>(initial_joints.size()) != chain.dof()) {
    fail(ErrorCode::kSchemaError, "initial_joints: length must match the chain");
  }
}

RobotConfig robot_config_from_json(const Json& doc, const std::filesystem::path& base_dir) {
  require_format(doc, kRobotFormat, "robot config");
  RobotConfig c;
  if (doc.contains("chain")) {
    c.chain = kin::chain_from_json(doc["chain"]);
  } else if (doc.contains("chain_file")) {
    const std::string file = require_string(doc, "chain_file", "");
    if (file == "builtin:gen3") {
      c.chain = kin::default_chain();
    } else {
      c.chain = kin::load_chain(base_dir / file);
    }
  } else {
    c.chain = kin::default_chain();
  }
  c.wheel_radius = require_number(doc, "wheel_radius", "");
  c.track_width = require_number(doc, "track_width", "");
  c.chassis_height = number_or(doc, "chassis_height", 0.0, "");
  c.mount = transform_from_rows(require(doc, "mount_transform", ""), "mount_transform");
  const auto grip = require_numbers(doc, "gripper_limits_rad", "", 2);
  c.gripper_min = grip[0];
  c.gripper_max = grip[1];
  const Json& caps = require(doc, "velocity_caps", "");
  c.max_linear = require_number(caps, "linear", "velocity_caps");
  c.max_angular = require_number(caps, "angular", "velocity_caps");
  c.ee_translation_step = number_or(doc, "ee_translation_step", 0.025, "");
  c.ee_rotation_step = number_or(doc, "ee_rotation_step", 0.05, "");
  c.gripper_step = number_or(doc, "gripper_step", 0.05, "");
  c.sim_rate_hz = static_cast<int>(number_or(doc, "sim_rate_hz", 60, ""));
  if (doc.contains("initial_joints")) {
    const auto q = require_numbers(doc, "initial_joints", "");
    c.initial_joints = Eigen::Map<const Eigen::VectorXd>(q.data(), static_cast<Eigen::Index>(q.size()));
  } else {
    c.initial_joints = kin::JointVector::Zero(static_cast<Eigen::Index>(c.chain.dof()));
  }
  if (doc.contains("imu_noise")) {
    const Json& n = doc["imu_noise"];
    c.imu_sigma_angular = number_or(n, "angular_sigma", c.imu_sigma_angular, "imu_noise");
    c.imu_sigma_linear = number_or(n, "linear_sigma", c.imu_sigma_linear, "imu_noise");
  }
  if (doc.contains("topic_rates_hz")) {
    const Json& r = doc["topic_rates_hz"];
    c.rates.joint_states = static_cast<int>(number_or(r, "joint_states", c.rates.joint_states, "topic_rates_hz"));
    c.rates.base = static_cast<int>(number_or(r, "base", c.rates.base, "topic_rates_hz"));
    c.rates.imu = static_cast<int>(number_or(r, "imu", c.rates.imu, "topic_rates_hz"));
    c.rates.camera = static_cast<int>(number_or(r, "camera", c.rates.camera, "topic_rates_hz"));
  }
  c.timestamp_jitter = number_or(doc, "timestamp_jitter_s", c.timestamp_jitter, "");
  c.validate();
  return c;
}

RobotConfig load_robot_config(const std::filesystem::path& path) {
  return robot_config_from_json(read_json_file(path), path.parent_path());
}

RobotConfig default_robot_config() {
  return robot_config_from_json(Json::parse(embedded_file("robot.json")), {});
}

Json robot_config_to_json(const RobotConfig& c) {
  Json doc;
  doc["format"] = kRobotFormat;
  doc["chain"] = kin::chain_to_json(c.chain);
  doc["wheel_radius"] = c.wheel_radius;
  doc["track_width"] = c.track_width;
  doc["chassis_height"] = c.chassis_height;
  doc["mount_transform"] = transform_rows(c.mount);
  doc["gripper_limits_rad"] = {c.gripper_min, c.gripper_max};
  doc["velocity_caps"] = {{"linear", c.max_linear}, {"angular", c.max_angular}};
  doc["ee_translation_step"] = c.ee_translation_step;
  doc["ee_rotation_step"] = c.ee_rotation_step;
  doc["gripper_step"] = c.gripper_step;
  doc["sim_rate_hz"] = c.sim_rate_hz;
  doc["initial_joints"] = std::vector<double>(c.initial_joints.data(), c.initial_joints.data() + c.initial_joints.size());
  doc["imu_noise"] = {{"angular_sigma", c.imu_sigma_angular}, {"linear_sigma", c.imu_sigma_linear}};
  doc["topic_rates_hz"] = {{"joint_states", c.rates.joint_states}, {"base", c.rates.base},
                           {"imu", c.rates.imu}, {"camera", c.rates.camera}};
  doc["timestamp_jitter_s"] = c.timestamp_jitter;
  return doc;
}

RigidTransform WheelchairState::pose_world() const {
  RigidTransform t = RigidTransform::from_rotation(kin::rotation_about(2, yaw));
  t.translation = Vec3(x, y, z);
  return t;
}

WheelchairState step_diff_drive(const WheelchairState& s, const VelocityCommand& cmd, double dt,
                                const RobotConfig& config) {
  WheelchairState n = s;
  n.time = s.time + dt;
  const double v = cmd.linear;
  const double w = cmd.angular;
  if (std::abs(w) < 1e-9) {
    n.x = s.x + v * std::cos(s.yaw) * dt;
    n.y = s.y + v * std::sin(s.yaw) * dt;
    n.yaw = s.yaw + w * dt;
  } else {
    // Arc of radius v/w written as a chord of length 2 (v/w) sin(w dt / 2)
    // along the mid-heading; avoids the v/w blow-up for small w.
    const double half = 0.5 * w * dt;
    const double sinc = std::abs(half) < 1e-4 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
    const double chord = v * dt * sinc;
    n.x = s.x + chord * std::cos(s.yaw + half);
    n.y = s.y + chord * std::sin(s.yaw + half);
    n.yaw = s.yaw + w * dt;
  }
  n.linear_vel = v;
  n.angular_vel = w;
  const double half_track = 0.5 * config.track_width;
  const double left = (v - w * half_track) / config.wheel_radius;
  const double right = (v + w * half_track) / config.wheel_radius;
  n.wheel_velocities = {left, right, left, right};
  for (std::size_t i = 0; i < 4; ++i) n.wheel_angles[i] = s.wheel_angles[i] + n.wheel_velocities[i] * dt;
  return n;
}

RigidTransform apply_ee_increment(const RigidTransform& target, EeAxis axis, int direction,
                                  const RobotConfig& config) {
  const double sign = direction >= 0 ? 1.0 : -1.0;
  RigidTransform out = target;
  switch (axis) {
    case EeAxis::kX:
    case EeAxis::kY:
    case EeAxis::kZ:
      out.translation[static_cast<int>(axis)] += sign * config.ee_translation_step;
      break;
    case EeAxis::kRoll:
    case EeAxis::kPitch:
    case EeAxis::kYaw: {
      const int k = static_cast<int>(axis) - 3;
      out.rotation = target.rotation * kin::rotation_about(k, sign * config.ee_rotation_step);
      break;
    }
  }
  return out;
}

RigidTransform apply_ee_increment(const ArmState& arm, EeAxis axis, int direction, const RobotConfig& config) {
  return apply_ee_increment(arm.ee_pose_arm, axis, direction, config);
}

RigidTransform mount_pose_world(const WheelchairState& base, const RobotConfig& config) {
  return base.pose_world() * config.mount;
}

void refresh_arm(ArmState& arm, const WheelchairState& base, const RobotConfig& config) {
  arm.ee_pose_arm = kin::poe_fk(config.chain, arm.q);
  arm.ee_pose_world = mount_pose_world(base, config) * arm.ee_pose_arm;
  if (arm.qdot.size() != arm.q.size()) arm.qdot = kin::JointVector::Zero(arm.q.size());
  arm.ee_twist = kin::Twist::from_vector(kin::body_jacobian(config.chain, arm.q) * arm.qdot);
}

ArmState make_arm_state(const kin::JointVector& q, const WheelchairState& base, const RobotConfig& config) {
  ArmState arm;
  arm.q = q;
  arm.qdot = kin::JointVector::Zero(q.size());
  arm.gripper_left = config.gripper_min;
  arm.gripper_right = config.gripper_min;
  refresh_arm(arm, base, config);
  return arm;
}

ArmState solve_and_apply(const ArmState& arm, const RigidTransform& target, const WheelchairState& base,
                         const RobotConfig& config, const kin::IkOptions& options) {
  const kin::IkSolution sol = kin::ik_newton_raphson(config.chain, target, arm.q, options);
  ArmState next = arm;
  next.q = sol.q;
  refresh_arm(next, base, config);
  return next;
}

ArmState set_gripper(const ArmState& arm, GripperCommand command, const RobotConfig& config) {
  const double step = command == GripperCommand::kCloseStep ? config.gripper_step : -config.gripper_step;
  ArmState next = arm;
  next.gripper_left = std::clamp(arm.gripper_left + step, config.gripper_min, config.gripper_max);
  next.gripper_right = std::clamp(arm.gripper_right + step, config.gripper_min, config.gripper_max);
  return next;
}

ImuSynthesizer::ImuSynthesizer(std::uint64_t seed, double sigma_angular, double sigma_linear)
    : rng_(seed), sigma_angular_(sigma_angular), sigma_linear_(sigma_linear) {}

ImuReading ImuSynthesizer::operator()(const WheelchairState& prev, const WheelchairState& next, double dt) {
  ImuReading r;
  r.timestamp = next.time;
  r.angular_velocity = Vec3(0.0, 0.0, (next.yaw - prev.yaw) / dt);
  // World-frame velocity difference, expressed in the body frame of `next`.
  const Vec3 v_prev(prev.linear_vel * std::cos(prev.yaw), prev.linear_vel * std::sin(prev.yaw), 0.0);
  const Vec3 v_next(next.linear_vel * std::cos(next.yaw), next.linear_vel * std::sin(next.yaw), 0.0);
  const Vec3 accel_world = (v_next - v_prev) / dt;
  const kin::Mat3 world_to_body = kin::rotation_about(2, next.yaw).transpose();
  r.linear_acceleration = world_to_body * accel_world + Vec3(0.0, 0.0, kGravity);
  if (sigma_angular_ > 0.0) {
    for (int i = 0; i < 3; ++i) r.angular_velocity[i] += sigma_angular_ * unit_(rng_);
  }
  if (sigma_linear_ > 0.0) {
    for (int i = 0; i < 3; ++i) r.linear_acceleration[i] += sigma_linear_ * unit_(rng_);
  }
  return r;
}

const char* axis_name(EeAxis axis) {
  switch (axis) {
    case EeAxis::kX: return "x";
    case EeAxis::kY: return "y";
    case EeAxis::kZ: return "z";
    case EeAxis::kRoll: return "roll";
    case EeAxis::kPitch: return "pitch";
    case EeAxis::kYaw: return "yaw";
  }
  return "?";
}

bool parse_axis(const std::string& name, EeAxis& out) {
  static constexpr std::array<EeAxis, 6> kAll{EeAxis::kX, EeAxis::kY, EeAxis::kZ,
                                               EeAxis::kRoll, EeAxis::kPitch, EeAxis::kYaw};
  for (EeAxis a : kAll) {
    if (name == axis_name(a)) {
      out = a;
      return true;
    }
  }
  return false;
}

}  // namespace wheelarm::robot
