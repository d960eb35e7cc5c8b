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
#include <optional>
#include <string>
#include <vector>

#include "scene/scene.hpp"

namespace wheelarm::scene {

struct RgbdFrame {
  std::string camera_id;
  double timestamp = 0.0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel
  std::vector<float> depth;       // metres along the optical axis, 0 = no hit

  bool operator==(const RgbdFrame&) const = default;
};

struct Hit {
  double t = 0.0;  // ray parameter; with the ray's z component 1 this is depth
  Vec3 normal = Vec3::UnitZ();
  Color color{};
};

// Nearest intersection of origin + t*dir (t >= t_min) with a primitive.
std::optional<Hit> intersect(const Primitive& p, const Vec3& origin, const Vec3& dir, double t_min);

// Raycasts one frame from camera pose `camera_world` (optical frame in the
// world). Flat object colours with Lambertian shading from one directional
// light; pure and deterministic.
RgbdFrame render_rgbd(const Scene& scene, const CameraModel& camera, const RigidTransform& camera_world,
                      double timestamp = 0.0);

// Area-averages an RGB frame down by an integer factor per axis.
std::vector<float> downsample_rgb(const RgbdFrame& frame, int out_width, int out_height);
std::vector<float> downsample_depth(const RgbdFrame& frame, int out_width, int out_height, float far);

}  // namespace wheelarm::scene
