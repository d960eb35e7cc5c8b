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
#include <string>
#include <vector>

#include "teleop/script.hpp"

namespace wheelarm::teleop {

enum class TaskKind { kPick, kPlace, kDrawer, kSelect };

struct TaskSpec {
  std::string name;       // script file stem, e.g. "pick_mustard"
  std::string object_id;
  TaskKind kind = TaskKind::kPick;
  std::string instruction;
  std::string task_label;
  double approach_yaw = 0.0;
  // Place tasks: where to set the object down, relative to where it was
  // picked, in the arm-mount frame.
  double place_dx = 0.0;
  double place_dy = 0.0;
};

// The thirteen shipped task families over the default scene.
const std::vector<TaskSpec>& task_catalog();
const TaskSpec& find_task(const std::string& name);

// Operator style knobs; variants draw these from a seed.
struct OperatorStyle {
  double linear_speed = 0.5;
  double angular_speed = 0.6;
  double click_interval = 0.1;  // seconds between keyboard clicks
  double settle = 0.5;          // pause after base motion and grasps
  double target_x = 0.40;       // object position in the arm-mount frame at grasp time
  double target_y = -0.20;
  double yaw_offset = 0.0;
  bool x_first = true;
  std::array<double, 3> start_pose{0.0, 0.0, 0.0};
};

OperatorStyle style_from_seed(std::uint64_t seed);

// Plans a script by driving a simulator closed-loop with keyboard-style
// commands. Throws Internal if a planned click is rejected.
Script plan_task(const TaskSpec& task, const robot::RobotConfig& config, const scene::Scene& scene,
                 const OperatorStyle& style, std::uint64_t seed);

// Mustard pick demonstrations with per-variant operator style.
Script plan_mustard_variant(int index, const robot::RobotConfig& config, const scene::Scene& scene);

}  // namespace wheelarm::teleop
