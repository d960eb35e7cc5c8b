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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "common/json_util.hpp"

namespace wheelarm::dataset {

inline constexpr const char* kDatasetFormat = "wheelarm-dataset/1";

// Fixed topic layout. Column 0 of every topic is its timestamp; quaternion
// blocks are (x, y, z, w) and start at the listed column.
struct TopicSpec {
  std::string name;
  std::vector<std::string> columns;
  std::vector<int> orientation_blocks;
  bool is_camera = false;
};

const std::vector<TopicSpec>& topic_specs();
const TopicSpec* find_topic_spec(const std::string& name);

inline constexpr const char* kJointStates = "joint_states";
inline constexpr const char* kBasePose = "base_pose";
inline constexpr const char* kBaseVelocity = "base_velocity";
inline constexpr const char* kWheelStates = "wheel_states";
inline constexpr const char* kEePose = "ee_pose";
inline constexpr const char* kGripper = "gripper";
inline constexpr const char* kImu = "imu";
inline constexpr const char* kCameraChassis = "camera_chassis";
inline constexpr const char* kCameraWrist = "camera_wrist";

std::string camera_topic(const std::string& camera_id);

struct SessionManifest {
  std::string session_id;
  std::string file_name;
  std::string instruction;
  std::string task_label;
  double start_time = 0.0;
  double end_time = 0.0;
  std::uint64_t seed = 0;
};

Json manifest_to_json(const SessionManifest& m);
SessionManifest manifest_from_json(const Json& j);

// Samples x channels, row-major, timestamp in column 0.
struct TopicData {
  std::string name;
  std::vector<std::string> columns;
  std::vector<int> orientation_blocks;
  std::vector<double> values;

  std::size_t cols() const { return columns.size(); }
  std::size_t rows() const { return cols() == 0 ? 0 : values.size() / cols(); }
  double at(std::size_t row, std::size_t col) const { return values[row * cols() + col]; }
  double time(std::size_t row) const { return at(row, 0); }
  void append(const std::vector<double>& row);
  bool operator==(const TopicData&) const = default;
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
  std::vector<float> depth;
  bool operator==(const Image&) const = default;
};

// Raw or aligned demonstration. Camera topics store the frame index in
// column 1; the images live in `frames[camera_id]`.
struct Recording {
  std::string kind = "raw";  // "raw" | "aligned"
  SessionManifest manifest;
  Json meta = Json::object();
  std::vector<TopicData> topics;
  std::map<std::string, std::vector<Image>> frames;

  TopicData* topic(const std::string& name);
  const TopicData* topic(const std::string& name) const;
  // The topic or EmptyTopic.
  const TopicData& require_topic(const std::string& name) const;
  bool operator==(const Recording& other) const;
};

// An empty recording with every topic of the fixed layout present.
Recording make_empty_recording(const std::vector<std::string>& camera_ids);

}  // namespace wheelarm::dataset
