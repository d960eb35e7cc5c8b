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

#include <cstdint>
#include <string>

#include "common/error.hpp"
#include "common/json_util.hpp"
#include "robot/robot.hpp"

namespace wheelarm::teleop {

enum class CommandKind { kEeIncrement, kGripper, kBaseVelocity, kStop };

struct TeleopCommand {
  CommandKind kind = CommandKind::kStop;
  robot::EeAxis axis = robot::EeAxis::kX;
  int direction = 1;
  robot::GripperCommand gripper = robot::GripperCommand::kCloseStep;
  robot::VelocityCommand velocity;
};

// Wire form, shared by scripts and the WebSocket protocol:
//   {"kind": "ee_increment", "axis": "x", "direction": 1}
//   {"kind": "gripper", "action": "close_step" | "open_step"}
//   {"kind": "base_velocity", "linear": 0.5, "angular": 0.0}
//   {"kind": "stop"}
// Throws MalformedCommand; velocities beyond the configured caps are malformed.
TeleopCommand parse_command(const Json& j, const robot::RobotConfig& config);
Json command_to_json(const TeleopCommand& cmd);
const char* kind_name(CommandKind kind);

struct Ack {
  std::uint64_t seq = 0;
  bool ok = true;
  ErrorCode code = ErrorCode::kInternal;  // meaningful when !ok
  std::string message;
  std::string grasp;  // grasp outcome for gripper commands
  std::string object_id;

  Json to_json() const;
};

}  // namespace wheelarm::teleop
