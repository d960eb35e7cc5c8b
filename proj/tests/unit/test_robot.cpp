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

#include <doctest.h>

#include <numbers>
#include <random>

#include "common/error.hpp"
#include "robot/robot.hpp"
#include "oracles.hpp"

using namespace wheelarm;
using namespace wheelarm::robot;

TEST_CASE("shipped robot config loads and matches defaults") {
  const RobotConfig c = load_robot_config(WHEELARM_DATA_DIR "/robot.json");
  const RobotConfig d = default_robot_config();
  CHECK(c.wheel_radius == 0.15);
  CHECK(c.track_width == 0.55);
  CHECK(c.mount.translation.z() == doctest::Approx(0.75));
  CHECK(c.gripper_max == 0.8);
  CHECK(c.chain.dof() == 7);
  CHECK(c.initial_joints == d.initial_joints);
  const RobotConfig back = robot_config_from_json(robot_config_to_json(c), ".");
  CHECK(back.mount.matrix() == c.mount.matrix());
  CHECK(back.rates.imu == 100);

  Json bad = robot_config_to_json(c);
  bad["wheel_radius"] = -1.0;
  CHECK_THROWS_AS(robot_config_from_json(bad, "."), Error);
  bad = robot_config_to_json(c);
  bad["timestamp_jitter_s"] = 0.01;  // exceeds half the 100 Hz period
  CHECK_THROWS_AS(robot_config_from_json(bad, "."), Error);
}

TEST_CASE("diff drive trivial commands") {
  const RobotConfig cfg = default_robot_config();
  WheelchairState s;
  s.x = 1.0;
  s.y = -2.0;
  s.yaw = 0.3;
  const WheelchairState still = step_diff_drive(s, {0.0, 0.0}, 0.25, cfg);
  CHECK(still.x == s.x);
  CHECK(still.y == s.y);
  CHECK(still.yaw == s.yaw);
  CHECK(still.time == 0.25);

  const WheelchairState line = step_diff_drive(WheelchairState{}, {1.0, 0.0}, 0.5, cfg);
  CHECK(line.x == 0.5);
  CHECK(line.y == 0.0);
  CHECK(line.yaw == 0.0);
}

TEST_CASE("diff drive full circle stays on the unit circle") {
  const RobotConfig cfg = default_robot_config();
  // v = w = 1 from the origin heading +x: centre (0, 1), radius 1.
  const WheelchairState s = step_diff_drive(WheelchairState{}, {1.0, 1.0}, std::numbers::pi, cfg);
  CHECK(std::hypot(s.x, s.y - 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  const auto ref = oracle::midpoint_unicycle({}, 1.0, 1.0, std::numbers::pi);
  CHECK(std::abs(s.x - ref.x) < 1e-6);
  CHECK(std::abs(s.y - ref.y) < 1e-6);
  CHECK(std::abs(s.yaw - ref.theta) < 1e-12);
}

TEST_CASE("diff drive arc matches fine-step Euler") {
  const RobotConfig cfg = default_robot_config();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> uv(-1.0, 1.0), uw(-1.5, 1.5), udt(1e-3, 0.1), uyaw(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    WheelchairState s;
    s.yaw = uyaw(rng);
    const double v = uv(rng), w = uw(rng), dt = udt(rng);
    const WheelchairState n = step_diff_drive(s, {v, w}, dt, cfg);
    const auto ref = oracle::euler_unicycle({0.0, 0.0, s.yaw}, v, w, dt);
    CHECK(std::hypot(n.x - ref.x, n.y - ref.y) < 1e-6);
  }
  // Tiny but nonzero turn rates stay on the straight-line limit.
  for (double w : {1e-8, -3e-7, 1e-5}) {
    const WheelchairState n = step_diff_drive(WheelchairState{}, {1.0, w}, 0.1, cfg);
    const auto ref = oracle::euler_unicycle({}, 1.0, w, 0.1);
    CHECK(std::hypot(n.x - ref.x, n.y - ref.y) < 1e-9);
  }
}

TEST_CASE("equal wheel speeds keep the heading constant") {
  const RobotConfig cfg = default_robot_config();
  WheelchairState s;
  s.yaw = 0.7;
  for (int i = 0; i < 600; ++i) {
    s = step_diff_drive(s, {0.8, 0.0}, 1.0 / 60.0, cfg);
    CHECK(s.yaw == 0.7);
    CHECK(s.wheel_velocities[0] == s.wheel_velocities[1]);
  }
}

TEST_CASE("wheel speeds follow the differential-drive relation") {
  const RobotConfig cfg = default_robot_config();
  const WheelchairState n = step_diff_drive(WheelchairState{}, {0.5, 1.0}, 0.1, cfg);
  const double left = (0.5 - 1.0 * 0.275) / 0.15;
  const double right = (0.5 + 1.0 * 0.275) / 0.15;
  CHECK(n.wheel_velocities[0] == doctest::Approx(left).epsilon(1e-14));
  CHECK(n.wheel_velocities[1] == doctest::Approx(right).epsilon(1e-14));
  CHECK(n.wheel_velocities[2] == n.wheel_velocities[0]);
  CHECK(n.wheel_velocities[3] == n.wheel_velocities[1]);
  CHECK(n.wheel_angles[1] == doctest::Approx(right * 0.1).epsilon(1e-14));
  const auto pose = n.pose_world();
  CHECK(pose.translation.z() == 0.0);
  CHECK(pose.rotation(2, 2) == 1.0);
}

TEST_CASE("ee increments") {
  const RobotConfig cfg = default_robot_config();
  const RigidTransform x1 = apply_ee_increment(RigidTransform::identity(), EeAxis::kX, +1, cfg);
  CHECK(x1.translation == kin::Vec3(0.025, 0, 0));
  CHECK(x1.rotation == kin::Mat3::Identity());

  std::mt19937_64 rng(8);
  RigidTransform start;
  start.rotation = kin::so3_exp(oracle::uniform_vector(rng, 3, -1, 1));
  start.translation = oracle::uniform_vector(rng, 3, -1, 1);
  for (EeAxis axis : {EeAxis::kRoll, EeAxis::kPitch, EeAxis::kYaw}) {
    const RigidTransform back = apply_ee_increment(apply_ee_increment(start, axis, +1, cfg), axis, -1, cfg);
    CHECK((back.matrix() - start.matrix()).norm() < 1e-12);
    const RigidTransform once = apply_ee_increment(start, axis, +1, cfg);
    CHECK(once.is_valid(1e-12));
    // One click is a 0.05 rad rotation about the body axis.
    const kin::Vec3 rel = kin::so3_log(start.rotation.transpose() * once.rotation);
    CHECK(rel.norm() == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(std::abs(rel[static_cast<int>(axis) - 3]) == doctest::Approx(0.05).epsilon(1e-12));
  }

  RigidTransform t = start;
  for (int i = 0; i < 40; ++i) t = apply_ee_increment(t, EeAxis::kX, +1, cfg);
  CHECK(t.translation.x() - start.translation.x() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("solve_and_apply moves the arm or leaves it untouched") {
  const RobotConfig cfg = default_robot_config();
  WheelchairState base;
  base.x = 1.0;
  base.yaw = 0.4;
  const ArmState arm = make_arm_state(cfg.initial_joints, base, cfg);
  CHECK((arm.ee_pose_world.matrix() - (mount_pose_world(base, cfg) * kin::poe_fk(cfg.chain, arm.q)).matrix()).norm() <
        1e-14);

  const ArmState same = solve_and_apply(arm, arm.ee_pose_arm, base, cfg);
  CHECK(same.q == arm.q);

  const RigidTransform step = apply_ee_increment(arm, EeAxis::kX, +1, cfg);
  const ArmState moved = solve_and_apply(arm, step, base, cfg);
  CHECK((moved.ee_pose_arm.matrix() - step.matrix()).norm() < 1e-5);
  CHECK((moved.ee_pose_world.matrix() - (mount_pose_world(base, cfg) * kin::poe_fk(cfg.chain, moved.q)).matrix())
            .norm() < 1e-12);

  RigidTransform below = arm.ee_pose_arm;
  below.translation.z() -= 5.0;  // far below the floor and out of reach
  try {
    solve_and_apply(arm, below, base, cfg);
    FAIL("expected an IK failure");
  } catch (const IkError& e) {
    CHECK(e.code() == ErrorCode::kMaxIterationsExceeded);
  }
}

TEST_CASE("gripper steps clamp to the actuator range") {
  const RobotConfig cfg = default_robot_config();
  ArmState arm = make_arm_state(cfg.initial_joints, WheelchairState{}, cfg);
  ArmState closed = set_gripper(arm, GripperCommand::kCloseStep, cfg);
  CHECK(closed.gripper_left == doctest::Approx(0.05));
  CHECK(closed.gripper_right == doctest::Approx(0.05));
  ArmState opened = set_gripper(arm, GripperCommand::kOpenStep, cfg);
  CHECK(opened.gripper_left == 0.0);
  for (int i = 0; i < 16; ++i) arm = set_gripper(arm, GripperCommand::kCloseStep, cfg);
  CHECK(arm.gripper_left == doctest::Approx(0.8));
  for (int i = 0; i < 5; ++i) arm = set_gripper(arm, GripperCommand::kCloseStep, cfg);
  CHECK(arm.gripper_left == 0.8);
  CHECK(arm.gripper_right == 0.8);
}

TEST_CASE("imu synthesis") {
  const RobotConfig cfg = default_robot_config();
  ImuSynthesizer clean(1, 0.0, 0.0);
  WheelchairState s;
  const ImuReading rest = clean(s, s, 0.01);
  CHECK(rest.angular_velocity.norm() == 0.0);
  CHECK(rest.linear_acceleration == kin::Vec3(0, 0, 9.81));

  WheelchairState a;
  a.yaw = 0.2;
  const WheelchairState b = step_diff_drive(a, {0.0, 0.5}, 0.01, cfg);
  CHECK(clean(a, b, 0.01).angular_velocity.z() == doctest::Approx(0.5).epsilon(1e-9));

  // Straight-line acceleration shows up on the body x axis.
  WheelchairState c;
  c.yaw = 1.0;
  c.linear_vel = 0.2;
  WheelchairState d = step_diff_drive(c, {0.3, 0.0}, 0.1, cfg);
  const ImuReading acc = clean(c, d, 0.1);
  CHECK(acc.linear_acceleration.x() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(acc.linear_acceleration.y()) < 1e-12);

  ImuSynthesizer n1(42, 0.005, 0.02), n2(42, 0.005, 0.02);
  double sum_sq = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const ImuReading r1 = n1(s, s, 0.01);
    const ImuReading r2 = n2(s, s, 0.01);
    CHECK(r1.linear_acceleration == r2.linear_acceleration);
    CHECK(r1.angular_velocity == r2.angular_velocity);
    sum_sq += (r1.linear_acceleration.x()) * (r1.linear_acceleration.x());
  }
  CHECK(std::sqrt(sum_sq / 2000) == doctest::Approx(0.02).epsilon(0.1));
}
