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
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dataset/recording.hpp"
#include "robot/robot.hpp"
#include "scene/render.hpp"
#include "scene/scene.hpp"
#include "teleop/command.hpp"

namespace wheelarm::teleop {

struct TopicSample {
  std::string topic;
  std::vector<double> row;  // timestamp first, as in dataset::topic_specs()
  std::optional<dataset::Image> image;
  std::string camera_id;
};

struct SimulatorOptions {
  bool render_cameras = true;
  // Initial base pose (x, y, yaw); the floor height comes from the config.
  std::array<double, 3> start_pose{0.0, 0.0, 0.0};
};

// Fixed-step WheelArm simulation with multi-rate, jittered topic fan-out.
// Single owner; not thread-safe.
class Simulator {
 public:
  Simulator(robot::RobotConfig config, scene::Scene scene, std::uint64_t seed, SimulatorOptions options = {});

  // Samples due at tick 0. Call once, before the first step().
  std::vector<TopicSample> publish_initial();
  // Advances one tick with the latched base velocity and returns every
  // sample due in (t_k, t_k+1], IMU sub-ticks included.
  std::vector<TopicSample> step();

  Ack handle_command(const TeleopCommand& cmd);

  std::uint64_t tick() const { return tick_; }
  double time() const { return tick_time(tick_); }
  double tick_time(std::uint64_t tick) const { return static_cast<double>(tick) / config_.sim_rate_hz; }
  const robot::RobotConfig& config() const { return config_; }
  const robot::WheelchairState& base() const { return base_; }
  const robot::ArmState& arm() const { return arm_; }
  const scene::Scene& scene() const { return scene_; }
  robot::VelocityCommand latched_velocity() const { return latched_; }
  std::uint64_t seed() const { return seed_; }

  kin::RigidTransform camera_world(const scene::CameraModel& camera) const;
  scene::RgbdFrame render(const std::string& camera_id) const;

  // Snapshot for the WebSocket `state` message.
  Json state_json() const;

 private:
  std::vector<double> stamped(std::size_t topic, std::uint64_t tick);
  double jittered(std::size_t topic, double nominal);
  void publish_tick(std::vector<TopicSample>& out);
  std::vector<double> quat_row(std::size_t slot, const kin::Mat3& r);

  robot::RobotConfig config_;
  scene::Scene scene_;
  std::uint64_t seed_;
  SimulatorOptions options_;

  std::uint64_t tick_ = 0;
  robot::WheelchairState base_;
  robot::ArmState arm_;
  kin::JointVector q_prev_tick_;
  robot::VelocityCommand latched_;
  robot::ImuSynthesizer imu_;
  robot::WheelchairState imu_prev_;
  std::uint64_t imu_index_ = 0;
  std::uint64_t ack_seq_ = 0;
  std::vector<std::mt19937_64> jitter_rngs_;
  std::array<kin::Vec4, 2> last_quat_{};
  std::array<bool, 2> have_quat_{};
  std::array<std::uint64_t, 2> frame_counts_{};
  bool initial_published_ = false;
};

}  // namespace wheelarm::teleop
