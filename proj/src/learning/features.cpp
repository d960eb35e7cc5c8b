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

#include "learning/features.hpp"

#include <cctype>
#include <cmath>

#include "common/error.hpp"
#include "scene/render.hpp"

namespace wheelarm::learning {

namespace {

struct Source {
  const char* topic;
  int first;
  int count;
};

// 7 + 7 + 7 + 7 + 2 + 8 + 6 + 2 = kStateDim
constexpr Source kStateSources[] = {{"joint_states", 1, 14}, {"ee_pose", 1, 7},      {"base_pose", 1, 7},
                                    {"base_velocity", 1, 2}, {"wheel_states", 1, 8}, {"imu", 1, 6},
                                    {"gripper", 1, 2}};
constexpr Source kTargetSources[] = {{"ee_pose", 1, 7}, {"base_pose", 1, 7}, {"gripper", 1, 2}};

const dataset::TopicData& topic(const dataset::Recording& rec, const char* name, std::size_t rows, int min_cols) {
  const dataset::TopicData* t = rec.topic(name);
  if (t == nullptr) fail(ErrorCode::kSchemaMismatch, std::string("aligned dataset has no topic ") + name);
  if (t->rows() != rows) fail(ErrorCode::kSchemaMismatch, std::string(name) + ": row count differs from the reference");
  if (t->cols() < static_cast<std::size_t>(min_cols)) fail(ErrorCode::kSchemaMismatch, std::string(name) + ": too few columns");
  return *t;
}

void mean_std(const std::vector<const TrajectoryFeatures*>& trajs, int dim,
              std::vector<double> TrajectoryFeatures::*field, std::vector<double>& mean, std::vector<double>& stdev) {
  mean.assign(dim, 0.0);
  stdev.assign(dim, 0.0);
  std::size_t n = 0;
  for (const auto* t : trajs) {
    const auto& v = t->*field;
    for (std::size_t r = 0; r < t->samples(); ++r) {
      for (int c = 0; c < dim; ++c) mean[c] += v[r * dim + c];
    }
    n += t->samples();
  }
  for (double& m : mean) m /= static_cast<double>(n);
  for (const auto* t : trajs) {
    const auto& v = t->*field;
    for (std::size_t r = 0; r < t->samples(); ++r) {
      for (int c = 0; c < dim; ++c) {
        const double d = v[r * dim + c] - mean[c];
        stdev[c] += d * d;
      }
    }
  }
  for (double& s : stdev) s = std::max(std::sqrt(s / static_cast<double>(n)), kStdFloor);
}

}  // namespace

const std::array<std::string, kTargetDim>& target_channel_names() {
  static const std::array<std::string, kTargetDim> names = {
      "ee_x",  "ee_y",  "ee_z",  "ee_qx", "ee_qy", "ee_qz", "ee_qw",        "w_x",
      "w_y",   "w_z",   "w_qx",  "w_qy",  "w_qz",  "w_qw",  "gripper_left", "gripper_right"};
  return names;
}

const std::array<std::string, kStateDim>& state_channel_names() {
  static const std::array<std::string, kStateDim> names = [] {
    std::array<std::string, kStateDim> n;
    std::size_t i = 0;
    for (int j = 1; j <= 7; ++j) n[i++] = "q" + std::to_string(j);
    for (int j = 1; j <= 7; ++j) n[i++] = "qdot" + std::to_string(j);
    for (const char* s : {"ee_x", "ee_y", "ee_z", "ee_qx", "ee_qy", "ee_qz", "ee_qw", "w_x", "w_y", "w_z", "w_qx",
                          "w_qy", "w_qz", "w_qw", "linear", "angular"}) {
      n[i++] = s;
    }
    for (int j = 0; j < 4; ++j) n[i++] = "wheel_angle" + std::to_string(j);
    for (int j = 0; j < 4; ++j) n[i++] = "wheel_velocity" + std::to_string(j);
    for (const char* s : {"wx", "wy", "wz", "ax", "ay", "az", "gripper_left", "gripper_right"}) n[i++] = s;
    return n;
  }();
  return names;
}

std::uint32_t fnv1a(std::string_view text) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : text) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

std::vector<int> tokenize(std::string_view instruction) {
  std::vector<int> out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.push_back(static_cast<int>(fnv1a(word) % kTokenBuckets));
    word.clear();
  };
  for (unsigned char c : instruction) {
    if (std::isspace(c)) {
      flush();
    } else {
      word.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return out;
}

TrajectoryFeatures featurize(const dataset::Recording& aligned, const std::string& camera, float far) {
  const dataset::TopicData& ref = aligned.require_topic("joint_states");
  const std::size_t rows = ref.rows();
  if (rows < 2) fail(ErrorCode::kInsufficientData, "trajectory needs at least 2 aligned rows");
  const auto frames = aligned.frames.find(camera);
  if (frames == aligned.frames.end() || frames->second.size() != rows) {
    fail(ErrorCode::kSchemaMismatch, "aligned dataset has no frame per row for camera " + camera);
  }

  TrajectoryFeatures f;
  f.session_id = aligned.manifest.session_id;
  f.camera = camera;
  f.tokens = tokenize(aligned.manifest.instruction);
  const std::size_t n = rows - 1;
  f.timestamp.resize(n);
  f.state.resize(n * kStateDim);
  f.target.resize(n * kTargetDim);
  f.rgb.reserve(n * kRgbDim);
  f.depth.reserve(n * kDepthDim);

  for (std::size_t k = 0; k < n; ++k) f.timestamp[k] = ref.time(k) - ref.time(0);
  std::size_t col = 0;
  for (const Source& s : kStateSources) {
    const auto& t = topic(aligned, s.topic, rows, s.first + s.count);
    for (std::size_t k = 0; k < n; ++k) {
      for (int c = 0; c < s.count; ++c) f.state[k * kStateDim + col + c] = t.at(k, s.first + c);
    }
    col += s.count;
  }
  col = 0;
  for (const Source& s : kTargetSources) {
    const auto& t = topic(aligned, s.topic, rows, s.first + s.count);
    for (std::size_t k = 0; k < n; ++k) {
      for (int c = 0; c < s.count; ++c) f.target[k * kTargetDim + col + c] = t.at(k + 1, s.first + c);
    }
    col += s.count;
  }

  for (std::size_t k = 0; k < n; ++k) {
    const dataset::Image& img = frames->second[k];
    if (img.width % kImageWidth != 0 || img.height % kImageHeight != 0 || img.width < kImageWidth ||
        img.height < kImageHeight) {
      fail(ErrorCode::kSchemaMismatch, "camera " + camera + ": frame size is not a multiple of 32x24");
    }
    scene::RgbdFrame frame;
    frame.width = img.width;
    frame.height = img.height;
    frame.rgb = img.rgb;
    frame.depth = img.depth;
    const auto rgb = scene::downsample_rgb(frame, kImageWidth, kImageHeight);
    const auto depth = scene::downsample_depth(frame, kImageWidth, kImageHeight, far);
    f.rgb.insert(f.rgb.end(), rgb.begin(), rgb.end());
    f.depth.insert(f.depth.end(), depth.begin(), depth.end());
  }
  for (double v : f.state) {
    if (!std::isfinite(v)) fail(ErrorCode::kSchemaMismatch, "non-finite state value in " + f.session_id);
  }
  return f;
}

NormStats compute_stats(const std::vector<const TrajectoryFeatures*>& train, float far) {
  if (train.empty()) fail(ErrorCode::kInsufficientData, "no training trajectories");
  NormStats s;
  mean_std(train, kStateDim, &TrajectoryFeatures::state, s.state_mean, s.state_std);
  mean_std(train, kTargetDim, &TrajectoryFeatures::target, s.target_mean, s.target_std);
  std::vector<double> tm, ts;
  mean_std(train, 1, &TrajectoryFeatures::timestamp, tm, ts);
  s.time_mean = tm[0];
  s.time_std = ts[0];
  s.depth_scale = 1.0f / far;
  return s;
}

Json NormStats::to_json() const {
  return Json{{"state_mean", state_mean},   {"state_std", state_std},   {"time_mean", time_mean},
              {"time_std", time_std},       {"target_mean", target_mean}, {"target_std", target_std},
              {"depth_scale", depth_scale}};
}

NormStats NormStats::from_json(const Json& j) {
  NormStats s;
  try {
    s.state_mean = j.at("state_mean").get<std::vector<double>>();
    s.state_std = j.at("state_std").get<std::vector<double>>();
    s.time_mean = j.at("time_mean").get<double>();
    s.time_std = j.at("time_std").get<double>();
    s.target_mean = j.at("target_mean").get<std::vector<double>>();
    s.target_std = j.at("target_std").get<std::vector<double>>();
    s.depth_scale = j.at("depth_scale").get<float>();
  } catch (const Json::exception& e) {
    fail(ErrorCode::kSchemaError, std::string("normalization stats: ") + e.what());
  }
  if (s.state_mean.size() != kStateDim || s.state_std.size() != kStateDim || s.target_mean.size() != kTargetDim ||
      s.target_std.size() != kTargetDim) {
    fail(ErrorCode::kSchemaError, "normalization stats have the wrong length");
  }
  return s;
}

}  // namespace wheelarm::learning
