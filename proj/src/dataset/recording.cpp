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

#include "dataset/recording.hpp"

namespace wheelarm::dataset {

namespace {

std::vector<TopicSpec> build_specs() {
  std::vector<TopicSpec> s;
  std::vector<std::string> joints{"t"};
  for (int i = 1; i <= 7; ++i) joints.push_back("q" + std::to_string(i));
  for (int i = 1; i <= 7; ++i) joints.push_back("qdot" + std::to_string(i));
  s.push_back({kJointStates, joints, {}, false});
  s.push_back({kBasePose, {"t", "x", "y", "z", "qx", "qy", "qz", "qw"}, {4}, false});
  s.push_back({kBaseVelocity, {"t", "linear", "angular"}, {}, false});
  s.push_back({kWheelStates,
               {"t", "angle_left", "angle_right", "angle_caster_left", "angle_caster_right", "vel_left", "vel_right",
                "vel_caster_left", "vel_caster_right"},
               {},
               false});
  s.push_back({kEePose, {"t", "x", "y", "z", "qx", "qy", "qz", "qw"}, {4}, false});
  s.push_back({kGripper, {"t", "left", "right"}, {}, false});
  s.push_back({kImu, {"t", "wx", "wy", "wz", "ax", "ay", "az"}, {}, false});
  s.push_back({kCameraChassis, {"t", "frame"}, {}, true});
  s.push_back({kCameraWrist, {"t", "frame"}, {}, true});
  return s;
}

}  // namespace

const std::vector<TopicSpec>& topic_specs() {
  static const std::vector<TopicSpec> specs = build_specs();
  return specs;
}

const TopicSpec* find_topic_spec(const std::string& name) {
  for (const TopicSpec& s : topic_specs()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::string camera_topic(const std::string& camera_id) { return "camera_" + camera_id; }

Json manifest_to_json(const SessionManifest& m) {
  return Json{{"session_id", m.session_id}, {"file_name", m.file_name}, {"instruction", m.instruction},
              {"task_label", m.task_label},  {"start_time", m.start_time}, {"end_time", m.end_time},
              {"seed", m.seed}};
}

SessionManifest manifest_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::kSchemaError, "manifest: expected an object");
  SessionManifest m;
  m.session_id = j.value("session_id", std::string());
  m.file_name = j.value("file_name", std::string());
  m.instruction = j.value("instruction", std::string());
  m.task_label = j.value("task_label", std::string());
  m.start_time = number_or(j, "start_time", 0.0, "manifest");
  m.end_time = number_or(j, "end_time", 0.0, "manifest");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0)) {
      fail(ErrorCode::kSchemaError, "manifest.seed: expected a non-negative integer");
    }
    m.seed = j["seed"].get<std::uint64_t>();
  }
  return m;
}

void TopicData::append(const std::vector<double>& row) {
  if (row.size() != cols()) {
    fail(ErrorCode::kShapeMismatch, "topic " + name + ": row has " + std::to_string(row.size()) + " values, expected " +
                                        std::to_string(cols()));
  }
  values.insert(values.end(), row.begin(), row.end());
}

TopicData* Recording::topic(const std::string& name) {
  for (TopicData& t : topics) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const TopicData* Recording::topic(const std::string& name) const {
  for (const TopicData& t : topics) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const TopicData& Recording::require_topic(const std::string& name) const {
  const TopicData* t = topic(name);
  if (t == nullptr || t->rows() == 0) fail(ErrorCode::kEmptyTopic, "topic " + name + " is missing or empty");
  return *t;
}

bool Recording::operator==(const Recording& o) const {
  return kind == o.kind && manifest_to_json(manifest) == manifest_to_json(o.manifest) && meta == o.meta &&
         topics == o.topics && frames == o.frames;
}

Recording make_empty_recording(const std::vector<std::string>& camera_ids) {
  Recording r;
  for (const TopicSpec& s : topic_specs()) {
    if (s.is_camera) continue;
    r.topics.push_back({s.name, s.columns, s.orientation_blocks, {}});
  }
  for (const std::string& cam : camera_ids) {
    r.topics.push_back({camera_topic(cam), {"t", "frame"}, {}, {}});
    r.frames[cam];
  }
  return r;
}

}  // namespace wheelarm::dataset
