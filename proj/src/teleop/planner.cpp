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

#include "teleop/planner.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace wheelarm::teleop {

namespace {

using kin::Vec3;
constexpr double kPi = std::numbers::pi;

// Drives a private simulator and appends every command it sends to a script.
class ScriptBuilder {
 public:
  ScriptBuilder(const robot::RobotConfig& config, const scene::Scene& scene, const OperatorStyle& style,
                std::uint64_t seed)
      : sim_(config, scene, seed, SimulatorOptions{false, style.start_pose}), style_(style) {
    sim_.publish_initial();
    script_.start_pose = style.start_pose;
    script_.seed = seed;
  }

  const Simulator& sim() const { return sim_; }

  Ack send(const TeleopCommand& cmd) {
    script_.commands.push_back({sim_.time(), cmd, 0});
    Ack ack = sim_.handle_command(cmd);
    if (!ack.ok) fail(ErrorCode::kInternal, "planned command rejected: " + ack.message);
    return ack;
  }

  void wait_ticks(long n) {
    for (long i = 0; i < n; ++i) sim_.step();
  }
  void wait(double seconds) { wait_ticks(std::lround(seconds * sim_.config().sim_rate_hz)); }

  void base(double linear, double angular) {
    TeleopCommand c;
    c.kind = CommandKind::kBaseVelocity;
    c.velocity = {linear, angular};
    send(c);
  }
  void stop() { send(TeleopCommand{}); }

  // Constant-rate motion of `amount` (signed) at `rate`, with a final
  // partial tick so the total is exact.
  void timed_motion(double amount, double rate, bool angular) {
    const double dt = 1.0 / sim_.config().sim_rate_hz;
    const double sign = amount < 0.0 ? -1.0 : 1.0;
    const double mag = std::abs(amount);
    const long full = static_cast<long>(std::floor(mag / (rate * dt)));
    const double rem = mag - full * rate * dt;
    if (full > 0) {
      angular ? base(0.0, sign * rate) : base(sign * rate, 0.0);
      wait_ticks(full);
    }
    if (rem > 1e-12) {
      angular ? base(0.0, sign * rem / dt) : base(sign * rem / dt, 0.0);
      wait_ticks(1);
    }
    stop();
  }

  void rotate_to(double yaw) {
    const double delta = kin::wrap_angle(yaw - sim_.base().yaw);
    if (std::abs(delta) > 1e-9) timed_motion(delta, style_.angular_speed, true);
  }

  void drive_to(double x, double y, double final_yaw) {
    const double dx = x - sim_.base().x, dy = y - sim_.base().y;
    const double dist = std::hypot(dx, dy);
    if (dist > 1e-6) {
      rotate_to(std::atan2(dy, dx));
      wait(0.2);
      timed_motion(dist, style_.linear_speed, false);
      wait(0.2);
    }
    rotate_to(final_yaw);
    wait(style_.settle);
  }

  // World point -> arm-mount frame at the current base pose.
  Vec3 to_mount(const Vec3& world) const {
    return robot::mount_pose_world(sim_.base(), sim_.config()).inverse().apply(world);
  }

  void click(robot::EeAxis axis, int direction, int count) {
    TeleopCommand c;
    c.kind = CommandKind::kEeIncrement;
    c.axis = axis;
    c.direction = direction;
    for (int i = 0; i < count; ++i) {
      send(c);
      wait(style_.click_interval);
    }
  }

  void move_axis(int axis, double target_mount) {
    const double step = sim_.config().ee_translation_step;
    const long n = std::lround((target_mount - sim_.arm().ee_pose_arm.translation[axis]) / step);
    if (n != 0) click(static_cast<robot::EeAxis>(axis), n > 0 ? 1 : -1, static_cast<int>(std::abs(n)));
  }

  // Moves the EE (mount frame) to `target`: z first when rising, last when
  // descending, so the gripper approaches from above.
  void move_ee_to(const Vec3& target) {
    const bool rising = target.z() > sim_.arm().ee_pose_arm.translation.z();
    if (rising) move_axis(2, target.z());
    if (style_.x_first) {
      move_axis(0, target.x());
      move_axis(1, target.y());
    } else {
      move_axis(1, target.y());
      move_axis(0, target.x());
    }
    if (!rising) move_axis(2, target.z());
  }

  scene::GraspOutcome gripper_until(robot::GripperCommand command, std::initializer_list<scene::GraspOutcome> stop_on) {
    TeleopCommand c;
    c.kind = CommandKind::kGripper;
    c.gripper = command;
    for (int i = 0; i < 20; ++i) {
      const Ack ack = send(c);
      wait(style_.click_interval);
      for (scene::GraspOutcome o : stop_on) {
        if (ack.grasp == scene::outcome_name(o)) return o;
      }
    }
    fail(ErrorCode::kInternal, "gripper never reached the expected grasp state");
  }

  Script finish(const TaskSpec& task) {
    wait(1.0);
    script_.manifest.file_name = task.name;
    script_.manifest.task_label = task.task_label;
    script_.manifest.instruction = task.instruction;
    script_.manifest.session_id = task.name;
    script_.duration = sim_.time();
    return script_;
  }

 private:
  Simulator sim_;
  OperatorStyle style_;
  Script script_;
};

Vec3 object_position(const scene::Scene& scene, const std::string& id) {
  const scene::SceneObject* o = scene.find(id);
  if (o == nullptr) fail(ErrorCode::kInvalidArgument, "scene has no object " + id);
  return o->articulation ? o->handle_position() : o->body.pose_world.translation;
}

}  // namespace

const std::vector<TaskSpec>& task_catalog() {
  static const std::vector<TaskSpec> tasks = {
      {"pick_grey_cup", "grey_cup", TaskKind::kPick, "pick up the grey cup from the kitchen table", "kitchenware", kPi},
      {"pick_blue_mug", "blue_mug", TaskKind::kPick, "pick up the blue mug", "kitchenware", kPi},
      {"pick_silver_bottle", "silver_bottle", TaskKind::kPick, "pick up the silver bottle", "kitchenware", kPi},
      {"pick_glass_bottle", "glass_bottle", TaskKind::kPick, "pick up the glass bottle", "kitchenware", kPi},
      {"pick_bowl", "bowl", TaskKind::kPick, "pick up the bowl from the table", "kitchenware", kPi},
      {"place_knife", "knife", TaskKind::kPlace, "move the knife further onto the table", "kitchenware", kPi, 0.0,
       -0.15},
      {"place_teddy_bear", "teddy_bear", TaskKind::kPlace, "put the teddy bear next to the mustard", "toy", 0.0, 0.0,
       0.15},
      {"open_drawer", "drawer", TaskKind::kDrawer, "open the drawer of the kitchen workstation", "drawer",
       kPi / 2},
      {"pick_mustard", "mustard", TaskKind::kPick, "pick up the mustard", "grocery", 0.0},
      {"pick_crackers", "crackers", TaskKind::kPick, "pick up the box of crackers", "grocery", 0.0},
      {"pick_tomato_soup", "tomato_soup", TaskKind::kPick, "pick up the tomato soup can", "grocery", 0.0},
      {"pick_meat_can", "meat_can", TaskKind::kPick, "pick up the canned meat", "grocery", 0.0},
      {"select_coke", "coke", TaskKind::kSelect, "take the coke from the shelf", "drink", -kPi / 2},
  };
  return tasks;
}

const TaskSpec& find_task(const std::string& name) {
  for (const TaskSpec& t : task_catalog()) {
    if (t.name == name) return t;
  }
  fail(ErrorCode::kInvalidArgument, "unknown task " + name);
}

OperatorStyle style_from_seed(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  OperatorStyle s;
  s.linear_speed = u(0.35, 0.6);
  s.angular_speed = u(0.4, 0.8);
  s.click_interval = std::round(u(0.08, 0.15) * 60.0) / 60.0;
  s.settle = u(0.3, 0.8);
  s.target_x = u(0.36, 0.44);
  s.target_y = u(-0.24, -0.16);
  s.yaw_offset = u(-0.15, 0.15);
  s.x_first = (rng() & 1u) == 0;
  s.start_pose = {u(-0.3, 0.3), u(-0.3, 0.3), u(-kPi, kPi)};
  return s;
}

Script plan_task(const TaskSpec& task, const robot::RobotConfig& config, const scene::Scene& scene,
                 const OperatorStyle& style, std::uint64_t seed) {
  ScriptBuilder b(config, scene, style, seed);
  const Vec3 target = object_position(scene, task.object_id);

  // Base pose that puts `target` at (target_x, target_y) in the mount frame.
  const double yaw = task.approach_yaw + style.yaw_offset;
  const kin::Mat3 r = kin::rotation_about(2, yaw);
  const Vec3 offset = r * config.mount.apply(Vec3(style.target_x, style.target_y, 0.0));
  b.drive_to(target.x() - offset.x(), target.y() - offset.y(), yaw);

  const Vec3 grasp = b.to_mount(target);
  const double above = 0.10;
  b.move_ee_to(grasp + Vec3(0, 0, above));
  b.move_ee_to(grasp);
  const scene::GraspOutcome got = b.gripper_until(
      robot::GripperCommand::kCloseStep, {scene::GraspOutcome::kAttached, scene::GraspOutcome::kHandleGrasped});
  b.wait(style.settle);

  switch (task.kind) {
    case TaskKind::kPick:
    case TaskKind::kSelect:
      b.move_ee_to(grasp + Vec3(0, 0, 0.15));
      if (task.kind == TaskKind::kSelect) b.move_ee_to(grasp + Vec3(-0.10, 0, 0.15));  // pull it clear of the shelf
      break;
    case TaskKind::kPlace: {
      const Vec3 lift = grasp + Vec3(0, 0, 0.10);
      b.move_ee_to(lift);
      const Vec3 drop = grasp + Vec3(task.place_dx, task.place_dy, 0.025);
      b.move_ee_to(drop + Vec3(0, 0, 0.075));
      b.move_ee_to(drop);
      b.gripper_until(robot::GripperCommand::kOpenStep, {scene::GraspOutcome::kDetached});
      b.move_ee_to(drop + Vec3(0, 0, 0.10));
      break;
    }
    case TaskKind::kDrawer: {
      if (got != scene::GraspOutcome::kHandleGrasped) fail(ErrorCode::kInternal, "drawer handle was not grasped");
      const scene::SceneObject* d = b.sim().scene().drawer();
      const Vec3 axis_mount =
          robot::mount_pose_world(b.sim().base(), config).rotation.transpose() * d->articulation->axis;
      int k = 0;
      axis_mount.cwiseAbs().maxCoeff(&k);
      b.click(static_cast<robot::EeAxis>(k), axis_mount[k] > 0 ? 1 : -1, 8);
      b.gripper_until(robot::GripperCommand::kOpenStep, {scene::GraspOutcome::kHandleReleased});
      b.move_ee_to(b.sim().arm().ee_pose_arm.translation + Vec3(0, 0, 0.10));
      break;
    }
  }
  return b.finish(task);
}

Script plan_mustard_variant(int index, const robot::RobotConfig& config, const scene::Scene& scene) {
  const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(index);
  Script s = plan_task(find_task("pick_mustard"), config, scene, style_from_seed(seed), seed);
  char name[32];
  std::snprintf(name, sizeof name, "mustard_%02d", index);
  s.manifest.file_name = name;
  s.manifest.session_id = name;
  return s;
}

}  // namespace wheelarm::teleop
