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

// wheelarm command-line front end. Talks to the library only through the C API.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wheelarm/wheelarm.h"

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct Failure {
  wa_status status;
  std::string message;
};

void check(wa_status s) {
  if (s != WA_OK) throw Failure{s, wa_last_error()};
}

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { wa_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

using RobotPtr = std::unique_ptr<wa_robot, decltype(&wa_robot_free)>;
using ScenePtr = std::unique_ptr<wa_scene, decltype(&wa_scene_free)>;

RobotPtr load_robot(const std::string& path) {
  wa_robot* r = nullptr;
  check(wa_robot_load(path.empty() ? nullptr : path.c_str(), &r));
  return {r, wa_robot_free};
}

ScenePtr load_scene(const std::string& path) {
  wa_scene* s = nullptr;
  check(wa_scene_load(path.empty() ? nullptr : path.c_str(), &s));
  return {s, wa_scene_free};
}

std::string read_file(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (f == nullptr) throw Failure{WA_IO_ERROR, "cannot open " + path};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
  std::fclose(f);
  return out;
}

void print_epoch(const char* json, void*) { std::cout << json << '\n' << std::flush; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"WheelArm: simulation, teleoperation recording, alignment and sequence-model training"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::optional<std::uint64_t> seed;
  std::string log_level = "info";
  bool version = false;
  app.add_flag("--version", version, "Print the library and file format versions");
  app.add_option("--seed", seed, "Seed for simulation noise, jitter and training");
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  std::string robot_path, scene_path, out_dir, script, ui_dir, host = "127.0.0.1";
  std::uint16_t port = 8765;
  auto* serve = app.add_subcommand("serve", "Run the WebSocket teleoperation service");
  serve->add_option("--port", port, "TCP port (0 picks a free one)");
  serve->add_option("--host", host, "Address to bind");
  serve->add_option("--robot", robot_path, "Robot config (wheelarm-robot/1)")->check(CLI::ExistingFile);
  serve->add_option("--scene", scene_path, "Scene layout (wheelarm-scene/1)")->check(CLI::ExistingFile);
  serve->add_option("--out", out_dir, "Directory for recorded sessions");
  auto* serve_replay = serve->add_option("--replay", script, "Replay a script headless instead of serving")
                           ->check(CLI::ExistingFile);
  auto* serve_ui = serve->add_option("--serve-ui", ui_dir, "Serve static UI assets from this directory")
                       ->check(CLI::ExistingDirectory);
  serve_replay->excludes(serve_ui);

  std::string replay_script, replay_out;
  auto* replay = app.add_subcommand("replay", "Replay a teleoperation script into <out>/raw.watr");
  replay->add_option("script", replay_script, "Script file (wheelarm-script/1, JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--out", replay_out, "Output directory")->required();
  replay->add_option("--robot", robot_path, "Robot config")->check(CLI::ExistingFile);
  replay->add_option("--scene", scene_path, "Scene layout")->check(CLI::ExistingFile);

  std::string align_in, align_out, reference = "chassis";
  auto* align = app.add_subcommand("align", "Resample a raw container onto camera timestamps");
  align->add_option("raw", align_in, "Raw container directory")->required()->check(CLI::ExistingDirectory);
  align->add_option("--out", align_out, "Output directory for aligned.watr")->required();
  align->add_option("--reference-camera", reference, "Camera whose timestamps form the reference");

  std::string inspect_in;
  bool inspect_json = false;
  auto* inspect = app.add_subcommand("inspect", "Print the topic table of a container");
  inspect->add_option("container", inspect_in, "Container directory")->required()->check(CLI::ExistingDirectory);
  inspect->add_flag("--json", inspect_json, "Machine-readable output");

  std::string data_dir, config_path, model_out = "model.json";
  auto* train = app.add_subcommand("train", "Train the sequence model on aligned containers");
  train->add_option("--data", data_dir, "Directory searched for aligned containers")
      ->required()
      ->check(CLI::ExistingDirectory);
  train->add_option("--config", config_path, "Training config JSON")->check(CLI::ExistingFile);
  train->add_option("--out", model_out, "Model file to write");

  std::string model_in, report = "report.csv", overlays;
  auto* eval = app.add_subcommand("eval", "Evaluate a model and write the per-channel report");
  eval->add_option("--model", model_in, "Model file")->required()->check(CLI::ExistingFile);
  eval->add_option("--data", data_dir, "Directory searched for aligned containers")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval->add_option("--report", report, "Report CSV path");
  eval->add_option("--overlays", overlays, "Directory for predicted-vs-truth series");

  std::string target_path;
  auto* ik = app.add_subcommand("ik", "Solve inverse kinematics for one target pose");
  ik->add_option("--robot", robot_path, "Chain (wheelarm-chain/1) or robot config")->check(CLI::ExistingFile);
  ik->add_option("--target", target_path, "Target JSON: pose (4x4) or position + quaternion, optional seed")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  if (version) {
    std::cout << "wheelarm " << wa_version() << '\n' << wa_format_versions() << '\n';
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    check(wa_set_log_level(log_level.c_str()));
    const int has_seed = seed.has_value() ? 1 : 0;
    const std::uint64_t seed_value = seed.value_or(0);

    if (serve->parsed() && !script.empty()) {
      auto robot = load_robot(robot_path);
      auto scene = load_scene(scene_path);
      OwnedString summary;
      check(wa_replay(robot.get(), scene.get(), script.c_str(), has_seed, seed_value,
                      out_dir.empty() ? "." : out_dir.c_str(), &summary.p));
      std::cout << summary.str() << '\n';
    } else if (serve->parsed()) {
      auto robot = load_robot(robot_path);
      auto scene = load_scene(scene_path);
      nlohmann::json options{{"host", host}, {"port", port}, {"seed", seed_value}, {"handle_signals", true}};
      if (!out_dir.empty()) options["out_dir"] = out_dir;
      if (!ui_dir.empty()) options["ui_dir"] = ui_dir;
      wa_server* srv = nullptr;
      check(wa_server_create(robot.get(), scene.get(), options.dump().c_str(), &srv));
      std::unique_ptr<wa_server, decltype(&wa_server_free)> server(srv, wa_server_free);
      std::cout << "listening on ws://" << host << ':' << wa_server_port(srv) << '\n' << std::flush;
      check(wa_server_run(srv));
    } else if (replay->parsed()) {
      auto robot = load_robot(robot_path);
      auto scene = load_scene(scene_path);
      OwnedString summary;
      check(wa_replay(robot.get(), scene.get(), replay_script.c_str(), has_seed, seed_value, replay_out.c_str(),
                      &summary.p));
      std::cout << summary.str() << '\n';
    } else if (align->parsed()) {
      OwnedString summary;
      check(wa_align(align_in.c_str(), align_out.c_str(), reference.c_str(), &summary.p));
      std::cout << summary.str() << '\n';
    } else if (inspect->parsed()) {
      OwnedString text;
      check(wa_inspect(inspect_in.c_str(), inspect_json ? 1 : 0, &text.p));
      std::cout << text.str();
    } else if (train->parsed()) {
      OwnedString summary;
      check(wa_train(data_dir.c_str(), config_path.empty() ? nullptr : config_path.c_str(), has_seed, seed_value,
                     model_out.c_str(), log_level == "off" ? nullptr : print_epoch, nullptr, &summary.p));
      std::cout << summary.str() << '\n';
    } else if (eval->parsed()) {
      OwnedString summary;
      check(wa_eval(model_in.c_str(), data_dir.c_str(), report.c_str(), overlays.empty() ? nullptr : overlays.c_str(),
                    &summary.p));
      std::cout << summary.str() << '\n';
    } else if (ik->parsed()) {
      auto robot = load_robot(robot_path);
      const std::string target = read_file(target_path);
      OwnedString result;
      check(wa_ik(robot.get(), target.c_str(), &result.p));
      std::cout << result.str() << '\n';
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << wa_status_name(f.status) << ": " << f.message << '\n';
    return kExitDomain;
  }
  return 0;
}
