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
#include <string>
#include <string_view>
#include <vector>

#include "common/json_util.hpp"
#include "dataset/recording.hpp"

namespace wheelarm::learning {

inline constexpr int kImageWidth = 32;
inline constexpr int kImageHeight = 24;
inline constexpr int kRgbDim = kImageWidth * kImageHeight * 3;
inline constexpr int kDepthDim = kImageWidth * kImageHeight;
inline constexpr int kStateDim = 46;
inline constexpr int kTargetDim = 16;
inline constexpr int kTokenBuckets = 1024;
inline constexpr double kStdFloor = 1e-6;

// Row names of the metric table, in target order.
const std::array<std::string, kTargetDim>& target_channel_names();
const std::array<std::string, kStateDim>& state_channel_names();

std::uint32_t fnv1a(std::string_view text);
// Lowercased, whitespace-split, FNV-1a hashed into kTokenBuckets.
std::vector<int> tokenize(std::string_view instruction);

// One aligned trajectory turned into (feature, next-step target) pairs.
// Row k of every matrix is sample k; images are row-major 32x24.
struct TrajectoryFeatures {
  std::string session_id;
  std::string camera;
  std::vector<int> tokens;
  std::vector<double> timestamp;  // seconds since the first aligned row
  std::vector<float> rgb;         // samples x kRgbDim, [0, 1]
  std::vector<float> depth;       // samples x kDepthDim, metres clipped to far
  std::vector<double> state;      // samples x kStateDim
  std::vector<double> target;     // samples x kTargetDim, pose at the next row

  std::size_t samples() const { return timestamp.size(); }
};

TrajectoryFeatures featurize(const dataset::Recording& aligned, const std::string& camera = "wrist",
                             float far = 6.0f);

// Per-channel mean/std over the training split.
struct NormStats {
  std::vector<double> state_mean, state_std;
  double time_mean = 0.0, time_std = 1.0;
  std::vector<double> target_mean, target_std;
  float depth_scale = 1.0f / 6.0f;

  Json to_json() const;
  static NormStats from_json(const Json& j);
};

NormStats compute_stats(const std::vector<const TrajectoryFeatures*>& train, float far = 6.0f);

}  // namespace wheelarm::learning
