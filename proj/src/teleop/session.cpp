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

#include "teleop/session.hpp"

#include <algorithm>

namespace wheelarm::teleop {

namespace {

Json recording_meta(const Simulator& sim) {
  const robot::RobotConfig& c = sim.config();
  return Json{{"sim_rate_hz", c.sim_rate_hz},
              {"topic_rates_hz",
               {{"joint_states", c.rates.joint_states}, {"base", c.rates.base}, {"imu", c.rates.imu},
                {"camera", c.rates.camera}}},
              {"timestamp_jitter_s", c.timestamp_jitter},
              {"imu_noise", {{"angular", c.imu_sigma_angular}, {"linear", c.imu_sigma_linear}}},
              {"reference_camera", "chassis"},
              {"quaternion_order", "xyzw"}};
}

}  // namespace

bool is_safe_file_name(const std::string& name) {
  if (name.empty() || name == "." || name == ".." || name.size() > 128) return false;
  for (char ch : name) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' ||
                    ch == '-' || ch == '.';
    if (!ok) return false;
  }
  return true;
}

SessionService::SessionService(Simulator sim) : sim_(std::move(sim)) {}

std::vector<TopicSample> SessionService::publish_initial() {
  std::vector<TopicSample> samples = sim_.publish_initial();
  record(samples);
  return samples;
}

std::vector<TopicSample> SessionService::step() {
  std::vector<TopicSample> samples = sim_.step();
  record(samples);
  return samples;
}

void SessionService::record(const std::vector<TopicSample>& samples) {
  if (!recording_) return;
  for (const TopicSample& s : samples) {
    dataset::TopicData* topic = recording_->topic(s.topic);
    if (topic == nullptr) fail(ErrorCode::kInternal, "unknown topic " + s.topic);
    if (s.image) {
      std::vector<dataset::Image>& images = recording_->frames[s.camera_id];
      std::vector<double> row = s.row;
      row[1] = static_cast<double>(images.size());  // indices restart per session
      topic->append(row);
      images.push_back(*s.image);
    } else {
      topic->append(s.row);
    }
    ++recorded_;
  }
}

const dataset::SessionManifest& SessionService::start_session(dataset::SessionManifest manifest) {
  if (recording_) fail(ErrorCode::kSessionAlreadyActive, "a session is already recording");
  if (manifest.instruction.empty()) fail(ErrorCode::kInvalidArgument, "session instruction must not be empty");
  if (manifest.session_id.empty()) {
    manifest.session_id = "session-" + std::to_string(sim_.seed()) + "-" + std::to_string(sim_.tick());
  }
  if (manifest.file_name.empty()) manifest.file_name = manifest.session_id;
  if (!is_safe_file_name(manifest.file_name)) {
    fail(ErrorCode::kInvalidArgument, "file_name must be a plain name ([A-Za-z0-9._-]): " + manifest.file_name);
  }
  manifest.start_time = sim_.time();
  manifest.end_time = 0.0;
  manifest.seed = sim_.seed();
  dataset::Recording rec = dataset::make_empty_recording({"chassis", "wrist"});
  rec.manifest = std::move(manifest);
  rec.meta = recording_meta(sim_);
  recording_ = std::move(rec);
  recorded_ = 0;
  return recording_->manifest;
}

dataset::Recording SessionService::end_session() {
  if (!recording_) fail(ErrorCode::kNoActiveSession, "no session is recording");
  dataset::Recording rec = std::move(*recording_);
  recording_.reset();
  // The last recorded tick. A session closed before any tick elapsed still
  // spans one period.
  rec.manifest.end_time = std::max(sim_.time(), rec.manifest.start_time + 1.0 / sim_.config().sim_rate_hz);
  return rec;
}

}  // namespace wheelarm::teleop
