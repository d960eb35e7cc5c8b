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
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "robot/robot.hpp"
#include "scene/scene.hpp"
#include "teleop/simulator.hpp"

namespace wheelarm::server {

inline constexpr const char* kProtocol = "wheelarm-ws/1";

struct ServerOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 8765;  // 0 picks a free port
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "recordings";
  std::optional<std::filesystem::path> ui_dir;  // static assets for --serve-ui
  teleop::SimulatorOptions sim;
  int state_every_ticks = 6;   // 10 Hz at a 60 Hz sim rate
  int frame_every_ticks = 30;  // 2 Hz
  int frame_width = 64;
  int frame_height = 48;
  bool handle_signals = false;  // SIGINT/SIGTERM stop the server
};

// Real-time teleoperation service: one thread runs the simulation, the
// WebSocket sessions and the optional static file server.
class Server {
 public:
  Server(robot::RobotConfig config, scene::Scene scene, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  std::uint16_t port() const;
  // Blocks until stop() or a handled signal. An active session is sealed and
  // written before returning.
  void run();
  // Safe to call from any thread.
  void stop();

  struct Impl;  // defined in server.cpp

 private:
  std::shared_ptr<Impl> impl_;
};

}  // namespace wheelarm::server
