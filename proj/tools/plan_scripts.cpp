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

// Regenerates the shipped task scripts: plan_scripts <out_dir> [--variants N]

#include <cstdio>
#include <filesystem>
#include <string>

#include "common/json_util.hpp"
#include "teleop/planner.hpp"

int main(int argc, char** argv) {
  using namespace wheelarm;
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <out_dir> [--variants N]\n", argv[0]);
    return 2;
  }
  const std::filesystem::path out = argv[1];
  int variants = 0;
  if (argc == 4 && std::string(argv[2]) == "--variants") variants = std::stoi(argv[3]);
  try {
    std::filesystem::create_directories(out);
    const robot::RobotConfig config = robot::default_robot_config();
    const scene::Scene scene = scene::default_scene();
    for (const teleop::TaskSpec& task : teleop::task_catalog()) {
      const teleop::Script s = teleop::plan_task(task, config, scene, teleop::OperatorStyle{}, 7);
      write_text_file(out / (task.name + ".jsonl"), teleop::script_to_text(s));
      std::printf("%-20s %6.2f s %4zu commands\n", task.name.c_str(), s.effective_duration(), s.commands.size());
    }
    for (int i = 0; i < variants; ++i) {
      const teleop::Script s = teleop::plan_mustard_variant(i, config, scene);
      write_text_file(out / (s.manifest.file_name + ".jsonl"), teleop::script_to_text(s));
      std::printf("%-20s %6.2f s %4zu commands\n", s.manifest.file_name.c_str(), s.effective_duration(),
                  s.commands.size());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: %s\n", std::string(e.name()).c_str(), e.what());
    return 1;
  }
  return 0;
}
