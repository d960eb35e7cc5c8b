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

#include <optional>
#include <vector>

#include "dataset/recording.hpp"
#include "teleop/simulator.hpp"

namespace wheelarm::teleop {

// Wraps a Simulator with the session lifecycle: samples published between
// start_session and end_session flow into one recording.
class SessionService {
 public:
  explicit SessionService(Simulator sim);

  Simulator& sim() { return sim_; }
  const Simulator& sim() const { return sim_; }

  std::vector<TopicSample> publish_initial();
  std::vector<TopicSample> step();
  Ack handle_command(const TeleopCommand& cmd) { return sim_.handle_command(cmd); }

  // Throws SessionAlreadyActive, or InvalidArgument for an empty instruction
  // or a file name that is not a single path component. Missing session_id
  // and file_name are derived from the seed and tick.
  const dataset::SessionManifest& start_session(dataset::SessionManifest manifest);
  // Seals the active recording. end_time is the time of the last recorded
  // tick, or start_time plus one period if none elapsed.
  // Throws NoActiveSession.
  dataset::Recording end_session();

  bool active() const { return recording_.has_value(); }
  const dataset::SessionManifest* current() const { return recording_ ? &recording_->manifest : nullptr; }
  // Samples recorded by the active session so far.
  std::size_t recorded_samples() const { return recorded_; }

 private:
  void record(const std::vector<TopicSample>& samples);

  Simulator sim_;
  std::optional<dataset::Recording> recording_;
  std::size_t recorded_ = 0;
};

bool is_safe_file_name(const std::string& name);

}  // namespace wheelarm::teleop
