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

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "common/json_util.hpp"
#include "kinematics/chain.hpp"
#include "kinematics/ik.hpp"

namespace wheelarm::robot {

using kin::RigidTransform;
using kin::Vec3;

inline constexpr const char* kRobotFormat = "wheelarm-robot/1";

struct TopicRates {
  int joint_states = 60;
  int base = 60;  // base pose, base velocities, wheel states, EE pose, gripper
  int imu = 100;
  int camera = 10;
};

// Geometry and limits of the combined wheelchair + arm. Loaded from a
// `wheelarm-robot/1` JSON file; defaults match the shipped robot.json.
struct RobotConfig {
  double wheel_radius = 0.15;
  double track_width = 0.55;
  double chassis_height = 0.0;
  RigidTransform mount;  // chassis -> arm base
  double gripper_min = 0.0;
  double gripper_max = 0.8;
  double max_linear = 1.0;
  double max_angular = 1.5;
  double ee_translation_step = 0.025;
  double ee_rotation_step = 0.05;
  double gripper_step = 0.05;
  int sim_rate_hz = 60;
  kin::JointVector initial_joints;
  double imu_sigma_angular = 0.005;
  double imu_sigma_linear = 0.02;
  TopicRates rates;
  double timestamp_jitter = 0.002;
  kin::ChainDescription chain;

  void validate() const;
};

RobotConfig robot_config_from_json(const Json& doc, const std::filesystem::path& base_dir);
RobotConfig load_robot_config(const std::filesystem::path& path);
RobotConfig default_robot_config();
Json robot_config_to_json(const RobotConfig& config);

struct VelocityCommand {
  double linear = 0.0;   // m/s, forward positive
  double angular = 0.0;  // rad/s, left positive
};

// Wheel order: left drive, right drive, left caster, right caster. The
// casters mirror the drive-wheel odometry.
struct WheelchairState {
  double time = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double yaw = 0.0;  // unwrapped
  double linear_vel = 0.0;
  double angular_vel = 0.0;
  std::array<double, 4> wheel_angles{};
  std::array<double, 4> wheel_velocities{};

  RigidTransform pose_world() const;
};

struct ImuReading {
  Vec3 angular_velocity = Vec3::Zero();
  Vec3 linear_acceleration = Vec3::Zero();
  double timestamp = 0.0;
};

struct ArmState {
  kin::JointVector q;
  kin::JointVector qdot;
  RigidTransform ee_pose_arm;    // in the arm-mount frame
  RigidTransform ee_pose_world;
  kin::Twist ee_twist;           // body twist J_b(q) qdot
  double gripper_left = 0.0;
  double gripper_right = 0.0;
};

enum class EeAxis { kX, kY, kZ, kRoll, kPitch, kYaw };
enum class GripperCommand { kOpenStep, kCloseStep };

// Exact unicycle integration over dt (closed-form arc, straight-line limit
// for |w| < 1e-9). Wheel angles integrate the implied wheel speeds.
WheelchairState step_diff_drive(const WheelchairState& state, const VelocityCommand& cmd, double dt,
                                const RobotConfig& config);

// Translation axes move the target 1 step along the arm-base axes; rotation
// axes compose a 1-step rotation about the EE body axis.
RigidTransform apply_ee_increment(const RigidTransform& target, EeAxis axis, int direction,
                                  const RobotConfig& config);
RigidTransform apply_ee_increment(const ArmState& arm, EeAxis axis, int direction, const RobotConfig& config);

RigidTransform mount_pose_world(const WheelchairState& base, const RobotConfig& config);

// Builds a consistent ArmState for q (FK, world pose, zero velocity).
ArmState make_arm_state(const kin::JointVector& q, const WheelchairState& base, const RobotConfig& config);
// Recomputes the derived fields after the base or q changed.
void refresh_arm(ArmState& arm, const WheelchairState& base, const RobotConfig& config);

// Solves IK seeded at arm.q for a target in the arm-mount frame and returns
// the updated state. On failure throws the solver's IkError; `arm` is never
// modified.
ArmState solve_and_apply(const ArmState& arm, const RigidTransform& target, const WheelchairState& base,
                         const RobotConfig& config, const kin::IkOptions& options = {});

ArmState set_gripper(const ArmState& arm, GripperCommand command, const RobotConfig& config);

// Finite-difference IMU model with a per-trajectory seeded noise generator.
class ImuSynthesizer {
 public:
  ImuSynthesizer(std::uint64_t seed, double sigma_angular, double sigma_linear);

  ImuReading operator()(const WheelchairState& prev, const WheelchairState& next, double dt);

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> unit_{0.0, 1.0};
  double sigma_angular_;
  double sigma_linear_;
};

inline constexpr double kGravity = 9.81;

const char* axis_name(EeAxis axis);
bool parse_axis(const std::string& name, EeAxis& out);

}  // namespace wheelarm::robot
