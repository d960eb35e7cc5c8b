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

#include "teleop/script.hpp"

#include <cmath>
#include <sstream>

#include "teleop/session.hpp"

namespace wheelarm::teleop {

namespace {

[[noreturn]] void script_error(int line, const std::string& msg) {
  fail(ErrorCode::kScriptError, "line " + std::to_string(line) + ": " + msg);
}

std::uint64_t tick_for(double t, int sim_rate) {
  const double k = std::ceil(t * sim_rate - 1e-9);
  return k <= 0.0 ? 0 : static_cast<std::uint64_t>(k);
}

}  // namespace

double Script::effective_duration() const {
  if (duration) return *duration;
  return commands.empty() ? 0.0 : commands.back().t;
}

Script parse_script(const std::string& text, const robot::RobotConfig& config) {
  Script s;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  bool header = false;
  double last_t = 0.0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      script_error(number, std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) script_error(number, "expected a JSON object");
    if (!header) {
      if (j.value("format", std::string()) != kScriptFormat) {
        script_error(number, std::string("header must declare format ") + kScriptFormat);
      }
      try {
        if (j.contains("manifest")) s.manifest = dataset::manifest_from_json(j["manifest"]);
        if (j.contains("duration")) {
          const double d = require_number(j, "duration", "");
          if (!(d >= 0.0) || !std::isfinite(d)) script_error(number, "duration must be finite and >= 0");
          s.duration = d;
        }
        if (j.contains("start_pose")) {
          const auto p = require_numbers(j, "start_pose", "", 3);
          s.start_pose = {p[0], p[1], p[2]};
        }
        if (j.contains("seed")) {
          if (!j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() < 0) {
            script_error(number, "seed must be a non-negative integer");
          }
          s.seed = j["seed"].get<std::uint64_t>();
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kScriptError) throw;
        script_error(number, e.what());
      }
      header = true;
      continue;
    }
    if (!j.contains("t") || !j["t"].is_number()) script_error(number, "command needs a numeric \"t\"");
    const double t = j["t"].get<double>();
    if (!std::isfinite(t) || t < 0.0) script_error(number, "t must be finite and >= 0");
    if (t < last_t) script_error(number, "command times must be non-decreasing");
    int repeat = 1;
    double interval = 0.0;
    if (j.contains("repeat")) {
      if (!j["repeat"].is_number_integer() || j["repeat"].get<int>() < 1) script_error(number, "repeat must be >= 1");
      repeat = j["repeat"].get<int>();
    }
    if (j.contains("interval")) {
      if (!j["interval"].is_number() || !(j["interval"].get<double>() > 0.0)) {
        script_error(number, "interval must be > 0");
      }
      interval = j["interval"].get<double>();
    }
    if (repeat > 1 && interval <= 0.0) script_error(number, "repeat needs an interval");
    TeleopCommand cmd;
    try {
      cmd = parse_command(j, config);
    } catch (const Error& e) {
      script_error(number, e.what());
    }
    for (int r = 0; r < repeat; ++r) s.commands.push_back({t + r * interval, cmd, number});
    last_t = t + (repeat - 1) * interval;
  }
  if (!header) script_error(number == 0 ? 1 : number, "missing header line");
  if (s.duration && !s.commands.empty() && s.commands.back().t > *s.duration + 1e-9) {
    script_error(s.commands.back().line, "command time exceeds the declared duration");
  }
  return s;
}

Script load_script(const std::filesystem::path& path, const robot::RobotConfig& config) {
  return parse_script(read_text_file(path), config);
}

std::string script_to_text(const Script& s) {
  Json header{{"format", kScriptFormat}, {"manifest", dataset::manifest_to_json(s.manifest)}};
  header["manifest"].erase("start_time");
  header["manifest"].erase("end_time");
  header["manifest"].erase("seed");
  if (s.duration) header["duration"] = *s.duration;
  header["start_pose"] = s.start_pose;
  if (s.seed) header["seed"] = *s.seed;
  std::string text = header.dump() + "\n";
  for (const ScriptCommand& c : s.commands) {
    Json j{{"t", c.t}};
    j.update(command_to_json(c.command));
    text += j.dump() + "\n";
  }
  return text;
}

ReplayResult replay_script(const Script& script, const robot::RobotConfig& config, const scene::Scene& scene,
                           std::optional<std::uint64_t> seed, SimulatorOptions options) {
  const std::uint64_t used_seed = seed ? *seed : script.seed.value_or(0);
  options.start_pose = script.start_pose;
  SessionService service(Simulator(config, scene, used_seed, options));
  dataset::SessionManifest manifest = script.manifest;
  if (manifest.instruction.empty()) manifest.instruction = manifest.task_label.empty() ? "replay" : manifest.task_label;
  service.start_session(manifest);

  ReplayResult result;
  result.published += service.publish_initial().size();
  const int rate = config.sim_rate_hz;
  std::uint64_t end_tick = tick_for(script.effective_duration(), rate);
  if (!script.commands.empty()) end_tick = std::max(end_tick, tick_for(script.commands.back().t, rate));
  std::size_t next = 0;
  for (std::uint64_t k = 0;; ++k) {
    while (next < script.commands.size() && tick_for(script.commands[next].t, rate) <= k) {
      Ack ack = service.handle_command(script.commands[next].command);
      if (!ack.ok) ++result.rejected;
      result.acks.push_back(std::move(ack));
      ++next;
    }
    if (k >= end_tick) break;
    result.published += service.step().size();
  }
  result.recording = service.end_session();
  result.recording.meta["replay"] = {{"commands", result.acks.size()}, {"rejected", result.rejected}};
  return result;
}

}  // namespace wheelarm::teleop
