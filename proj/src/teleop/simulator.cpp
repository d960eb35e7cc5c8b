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

#include "teleop/simulator.hpp"

#include <cmath>

namespace wheelarm::teleop {

namespace {

using dataset::topic_specs;

// Indices into topic_specs().
enum TopicIndex : std::size_t {
  kJoint = 0,
  kBasePoseIdx,
  kBaseVelIdx,
  kWheelIdx,
  kEeIdx,
  kGripperIdx,
  kImuIdx,
  kCamChassisIdx,
  kCamWristIdx,
};

constexpr std::array<const char*, 2> kCameraIds{"chassis", "wrist"};

bool due(std::uint64_t tick, int sim_rate, int rate) { return tick % static_cast<std::uint64_t>(sim_rate / rate) == 0; }

}  // namespace

Simulator::Simulator(robot::RobotConfig config, scene::Scene scene, std::uint64_t seed, SimulatorOptions options)
    : config_(std::move(config)),
      scene_(std::move(scene)),
      seed_(seed),
      options_(options),
      imu_(seed, config_.imu_sigma_angular, config_.imu_sigma_linear) {
  config_.validate();
  for (const char* id : kCameraIds) (void)scene_.camera(id);  // SchemaError if missing
  base_.x = options_.start_pose[0];
  base_.y = options_.start_pose[1];
  base_.yaw = options_.start_pose[2];
  base_.z = config_.chassis_height;
  arm_ = robot::make_arm_state(config_.initial_joints, base_, config_);
  q_prev_tick_ = arm_.q;
  imu_prev_ = base_;
  for (std::size_t i = 0; i < topic_specs().size(); ++i) {
    // The IMU noise stream owns `seed` itself; jitter streams are derived.
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i + 1)};
    jitter_rngs_.emplace_back(seq);
  }
}

double Simulator::jittered(std::size_t topic, double nominal) {
  if (config_.timestamp_jitter <= 0.0) return nominal;
  std::uniform_real_distribution<double> u(-config_.timestamp_jitter, config_.timestamp_jitter);
  return nominal + u(jitter_rngs_[topic]);
}

std::vector<double> Simulator::stamped(std::size_t topic, std::uint64_t tick) {
  return {jittered(topic, tick_time(tick))};
}

std::vector<double> Simulator::quat_row(std::size_t slot, const kin::Mat3& r) {
  kin::Vec4 q = kin::rotation_to_quat_xyzw(r);
  // Published streams stay in one hemisphere so consumers see no sign flips.
  if (have_quat_[slot] && q.dot(last_quat_[slot]) < 0.0) q = -q;
  last_quat_[slot] = q;
  have_quat_[slot] = true;
  return {q(0), q(1), q(2), q(3)};
}

kin::RigidTransform Simulator::camera_world(const scene::CameraModel& camera) const {
  if (camera.parent == scene::CameraParent::kWrist) return arm_.ee_pose_world * camera.mount_offset;
  return base_.pose_world() * camera.mount_offset;
}

scene::RgbdFrame Simulator::render(const std::string& camera_id) const {
  const scene::CameraModel& cam = scene_.camera(camera_id);
  return scene::render_rgbd(scene_, cam, camera_world(cam), time());
}

void Simulator::publish_tick(std::vector<TopicSample>& out) {
  const int sim = config_.sim_rate_hz;
  auto emit = [&](std::size_t idx, std::vector<double> row) {
    out.push_back(TopicSample{topic_specs()[idx].name, std::move(row), std::nullopt, {}});
  };
  if (due(tick_, sim, config_.rates.joint_states)) {
    std::vector<double> row = stamped(kJoint, tick_);
    for (int i = 0; i < arm_.q.size(); ++i) row.push_back(arm_.q(i));
    for (int i = 0; i < arm_.qdot.size(); ++i) row.push_back(arm_.qdot(i));
    emit(kJoint, std::move(row));
  }
  if (due(tick_, sim, config_.rates.base)) {
    const kin::RigidTransform pose = base_.pose_world();
    std::vector<double> row = stamped(kBasePoseIdx, tick_);
    row.insert(row.end(), {pose.translation.x(), pose.translation.y(), pose.translation.z()});
    const auto q = quat_row(0, pose.rotation);
    row.insert(row.end(), q.begin(), q.end());
    emit(kBasePoseIdx, std::move(row));

    row = stamped(kBaseVelIdx, tick_);
    row.insert(row.end(), {base_.linear_vel, base_.angular_vel});
    emit(kBaseVelIdx, std::move(row));

    row = stamped(kWheelIdx, tick_);
    row.insert(row.end(), base_.wheel_angles.begin(), base_.wheel_angles.end());
    row.insert(row.end(), base_.wheel_velocities.begin(), base_.wheel_velocities.end());
    emit(kWheelIdx, std::move(row));

    row = stamped(kEeIdx, tick_);
    const kin::Vec3& p = arm_.ee_pose_world.translation;
    row.insert(row.end(), {p.x(), p.y(), p.z()});
    const auto qe = quat_row(1, arm_.ee_pose_world.rotation);
    row.insert(row.end(), qe.begin(), qe.end());
    emit(kEeIdx, std::move(row));

    row = stamped(kGripperIdx, tick_);
    row.insert(row.end(), {arm_.gripper_left, arm_.gripper_right});
    emit(kGripperIdx, std::move(row));
  }
  if (due(tick_, sim, config_.rates.camera)) {
    for (std::size_t c = 0; c < kCameraIds.size(); ++c) {
      const std::size_t idx = c == 0 ? kCamChassisIdx : kCamWristIdx;
      std::vector<double> row = stamped(idx, tick_);
      row.push_back(static_cast<double>(frame_counts_[c]++));
      TopicSample s{topic_specs()[idx].name, std::move(row), std::nullopt, kCameraIds[c]};
      if (options_.render_cameras) {
        scene::RgbdFrame f = render(kCameraIds[c]);
        s.image = dataset::Image{f.width, f.height, std::move(f.rgb), std::move(f.depth)};
      }
      out.push_back(std::move(s));
    }
  }
}

std::vector<TopicSample> Simulator::publish_initial() {
  if (initial_published_) fail(ErrorCode::kInternal, "publish_initial called twice");
  initial_published_ = true;
  std::vector<TopicSample> out;
  robot::ImuReading r = imu_(base_, base_, 1.0 / config_.rates.imu);
  out.push_back(TopicSample{dataset::kImu,
                            {jittered(kImuIdx, 0.0), r.angular_velocity.x(), r.angular_velocity.y(),
                             r.angular_velocity.z(), r.linear_acceleration.x(), r.linear_acceleration.y(),
                             r.linear_acceleration.z()},
                            std::nullopt,
                            {}});
  imu_index_ = 1;
  publish_tick(out);
  return out;
}

std::vector<TopicSample> Simulator::step() {
  if (!initial_published_) fail(ErrorCode::kInternal, "step called before publish_initial");
  std::vector<TopicSample> out;
  const robot::WheelchairState start = base_;
  const std::uint64_t next_tick = tick_ + 1;
  const int sim = config_.sim_rate_hz;
  const int imu_rate = config_.rates.imu;

  // IMU samples m with t_k < m / imu_rate <= t_k+1, from the exact sub-tick state.
  while (imu_index_ * static_cast<std::uint64_t>(sim) <= next_tick * static_cast<std::uint64_t>(imu_rate)) {
    const double t_m = static_cast<double>(imu_index_) / imu_rate;
    robot::WheelchairState s = robot::step_diff_drive(start, latched_, t_m - start.time, config_);
    s.time = t_m;
    const robot::ImuReading r = imu_(imu_prev_, s, 1.0 / imu_rate);
    out.push_back(TopicSample{dataset::kImu,
                              {jittered(kImuIdx, t_m), r.angular_velocity.x(), r.angular_velocity.y(),
                               r.angular_velocity.z(), r.linear_acceleration.x(), r.linear_acceleration.y(),
                               r.linear_acceleration.z()},
                              std::nullopt,
                              {}});
    imu_prev_ = s;
    ++imu_index_;
  }

  const double dt = 1.0 / sim;
  base_ = robot::step_diff_drive(start, latched_, dt, config_);
  base_.time = tick_time(next_tick);
  tick_ = next_tick;

  for (int i = 0; i < arm_.q.size(); ++i) {
    const double dq = config_.chain.screw_axes[i].head<3>().squaredNorm() > 0.0
                          ? kin::wrap_angle(arm_.q(i) - q_prev_tick_(i))
                          : arm_.q(i) - q_prev_tick_(i);
    arm_.qdot(i) = dq / dt;
  }
  q_prev_tick_ = arm_.q;
  robot::refresh_arm(arm_, base_, config_);
  scene::follow_ee(scene_, arm_.ee_pose_world);

  publish_tick(out);
  return out;
}

Ack Simulator::handle_command(const TeleopCommand& cmd) {
  Ack ack;
  ack.seq = ++ack_seq_;
  switch (cmd.kind) {
    case CommandKind::kEeIncrement: {
      const kin::RigidTransform target = robot::apply_ee_increment(arm_, cmd.axis, cmd.direction, config_);
      const kin::Vec3 before = arm_.ee_pose_world.translation;
      try {
        arm_ = robot::solve_and_apply(arm_, target, base_, config_);
      } catch (const IkError& e) {
        ack.ok = false;
        ack.code = ErrorCode::kIkRejected;
        ack.message = std::string(e.name()) + ": " + e.what();
        return ack;
      }
      if (scene_.handle_grasped) {
        if (const scene::SceneObject* d = scene_.drawer()) {
          const double delta = (arm_.ee_pose_world.translation - before).dot(d->articulation->axis);
          try {
            scene::actuate_drawer(scene_, before, delta);
          } catch (const Error&) {
            scene_.handle_grasped = false;  // the handle slipped out of the gripper
          }
        }
      }
      scene::follow_ee(scene_, arm_.ee_pose_world);
      break;
    }
    case CommandKind::kGripper: {
      arm_ = robot::set_gripper(arm_, cmd.gripper, config_);
      const scene::GraspResult r =
          scene::try_grasp(scene_, arm_.ee_pose_world, arm_.gripper_left, arm_.gripper_right);
      ack.grasp = scene::outcome_name(r.outcome);
      ack.object_id = r.object_id;
      break;
    }
    case CommandKind::kBaseVelocity:
      latched_ = cmd.velocity;
      break;
    case CommandKind::kStop:
      latched_ = {};
      break;
  }
  return ack;
}

Json Simulator::state_json() const {
  const kin::Vec4 q_ee = kin::rotation_to_quat_xyzw(arm_.ee_pose_world.rotation);
  Json objects = Json::array();
  for (const scene::SceneObject& o : scene_.objects) {
    const kin::Vec3& p = o.body.pose_world.translation;
    objects.push_back({{"id", o.id}, {"position", {p.x(), p.y(), p.z()}}});
  }
  Json attached = Json::array();
  if (scene_.attached) attached.push_back(scene_.attached->object_id);
  Json j{{"type", "state"},
         {"time", time()},
         {"tick", tick_},
         {"base",
          {{"x", base_.x}, {"y", base_.y}, {"yaw", base_.yaw}, {"linear", base_.linear_vel},
           {"angular", base_.angular_vel}}},
         {"ee",
          {{"position",
            {arm_.ee_pose_world.translation.x(), arm_.ee_pose_world.translation.y(),
             arm_.ee_pose_world.translation.z()}},
           {"orientation", {q_ee(0), q_ee(1), q_ee(2), q_ee(3)}}}},
         {"gripper", {arm_.gripper_left, arm_.gripper_right}},
         {"attached", attached},
         {"objects", objects}};
  if (const scene::SceneObject* d = scene_.drawer()) {
    j["drawer"] = {{"displacement", d->articulation->displacement}, {"handle_grasped", scene_.handle_grasped}};
  }
  return j;
}

}  // namespace wheelarm::teleop
