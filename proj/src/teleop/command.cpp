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

#include "teleop/command.hpp"

#include <cmath>

namespace wheelarm::teleop {

namespace {

[[noreturn]] void malformed(const std::string& msg) { fail(ErrorCode::kMalformedCommand, msg); }

double finite_number(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) malformed(std::string("command.") + key + ": expected a number");
  const double v = j[key].get<double>();
  if (!std::isfinite(v)) malformed(std::string("command.") + key + ": must be finite");
  return v;
}

}  // namespace

const char* kind_name(CommandKind kind) {
  switch (kind) {
    case CommandKind::kEeIncrement: return "ee_increment";
    case CommandKind::kGripper: return "gripper";
    case CommandKind::kBaseVelocity: return "base_velocity";
    case CommandKind::kStop: return "stop";
  }
  return "?";
}

TeleopCommand parse_command(const Json& j, const robot::RobotConfig& config) {
  if (!j.is_object()) malformed("command: expected an object");
  if (!j.contains("kind") || !j["kind"].is_string()) malformed("command.kind: expected a string");
  const std::string kind = j["kind"].get<std::string>();
  TeleopCommand c;
  if (kind == "ee_increment") {
    c.kind = CommandKind::kEeIncrement;
    if (!j.contains("axis") || !j["axis"].is_string() || !robot::parse_axis(j["axis"].get<std::string>(), c.axis)) {
      malformed("command.axis: expected one of x, y, z, roll, pitch, yaw");
    }
    if (!j.contains("direction") || !j["direction"].is_number_integer()) {
      malformed("command.direction: expected +1 or -1");
    }
    c.direction = j["direction"].get<int>();
    if (c.direction != 1 && c.direction != -1) malformed("command.direction: expected +1 or -1");
  } else if (kind == "gripper") {
    c.kind = CommandKind::kGripper;
    const std::string action = j.contains("action") && j["action"].is_string() ? j["action"].get<std::string>() : "";
    if (action == "close_step") {
      c.gripper = robot::GripperCommand::kCloseStep;
    } else if (action == "open_step") {
      c.gripper = robot::GripperCommand::kOpenStep;
    } else {
      malformed("command.action: expected open_step or close_step");
    }
  } else if (kind == "base_velocity") {
    c.kind = CommandKind::kBaseVelocity;
    c.velocity.linear = finite_number(j, "linear");
    c.velocity.angular = finite_number(j, "angular");
    if (std::abs(c.velocity.linear) > config.max_linear + 1e-12) {
      malformed("command.linear: exceeds the cap of " + std::to_string(config.max_linear) + " m/s");
    }
    if (std::abs(c.velocity.angular) > config.max_angular + 1e-12) {
      malformed("command.angular: exceeds the cap of " + std::to_string(config.max_angular) + " rad/s");
    }
  } else if (kind == "stop") {
    c.kind = CommandKind::kStop;
  } else {
    malformed("command.kind: unknown kind '" + kind + "'");
  }
  return c;
}

Json command_to_json(const TeleopCommand& c) {
  Json j{{"kind", kind_name(c.kind)}};
  switch (c.kind) {
    case CommandKind::kEeIncrement:
      j["axis"] = robot::axis_name(c.axis);
      j["direction"] = c.direction;
      break;
    case CommandKind::kGripper:
      j["action"] = c.gripper == robot::GripperCommand::kCloseStep ? "close_step" : "open_step";
      break;
    case CommandKind::kBaseVelocity:
      j["linear"] = c.velocity.linear;
      j["angular"] = c.velocity.angular;
      break;
    case CommandKind::kStop:
      break;
  }
  return j;
}

Json Ack::to_json() const {
  Json j{{"type", "ack"}, {"seq", seq}, {"ok", ok}};
  if (!ok) {
    j["error"] = std::string(error_name(code));
    j["message"] = message;
  }
  if (!grasp.empty()) j["grasp"] = grasp;
  if (!object_id.empty()) j["object"] = object_id;
  return j;
}

}  // namespace wheelarm::teleop
