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
#include <optional>
#include <string>
#include <vector>

#include "dataset/recording.hpp"
#include "scene/scene.hpp"
#include "teleop/command.hpp"
#include "teleop/simulator.hpp"

namespace wheelarm::teleop {

inline constexpr const char* kScriptFormat = "wheelarm-script/1";

struct ScriptCommand {
  double t = 0.0;
  TeleopCommand command;
  int line = 0;
};

// JSON Lines. Line 1 is the header:
//   {"format": "wheelarm-script/1", "manifest": {...}, "duration": 12.0,
//    "start_pose": [x, y, yaw], "seed": 7}
// Every further non-blank line is one command with a time and the wire
// fields of parse_command, optionally expanded with "repeat" and "interval":
//   {"t": 1.5, "kind": "ee_increment", "axis": "z", "direction": -1, "repeat": 4, "interval": 0.1}
// Times must be non-decreasing. A command takes effect at the first tick at
// or after its time.
struct Script {
  dataset::SessionManifest manifest;
  std::optional<double> duration;  // defaults to the last command time
  std::array<double, 3> start_pose{0.0, 0.0, 0.0};
  std::optional<std::uint64_t> seed;
  std::vector<ScriptCommand> commands;

  double effective_duration() const;
};

// Throws ScriptError with the 1-based line number.
Script parse_script(const std::string& text, const robot::RobotConfig& config);
Script load_script(const std::filesystem::path& path, const robot::RobotConfig& config);
std::string script_to_text(const Script& script);

struct ReplayResult {
  dataset::Recording recording;
  std::vector<Ack> acks;
  std::size_t rejected = 0;
  std::size_t published = 0;
};

// Deterministic replay on the fixed-step clock, as fast as possible. The
// seed is `seed` if given, else the script's, else 0.
ReplayResult replay_script(const Script& script, const robot::RobotConfig& config, const scene::Scene& scene,
                           std::optional<std::uint64_t> seed = std::nullopt, SimulatorOptions options = {});

}  // namespace wheelarm::teleop
