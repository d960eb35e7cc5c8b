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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "common/json_util.hpp"
#include "kinematics/se3.hpp"

namespace wheelarm::scene {

using kin::RigidTransform;
using kin::Vec3;

inline constexpr const char* kSceneFormat = "wheelarm-scene/1";

enum class Shape { kBox, kCylinder, kSphere };

using Color = std::array<std::uint8_t, 3>;

struct Primitive {
  Shape shape = Shape::kBox;
  // box: full extents (x, y, z); cylinder: (radius, height), axis along
  // local z; sphere: (radius).
  std::vector<double> dimensions;
  RigidTransform pose_world;  // primitive centre
  Color color{128, 128, 128};

  double half_height() const;
};

struct Articulation {
  Vec3 axis = Vec3::UnitX();  // unit, world frame
  double min = 0.0;
  double max = 0.3;
  double displacement = 0.0;
  Vec3 handle_offset = Vec3::Zero();  // from the closed-pose centre, world frame
};

struct SceneObject {
  std::string id;
  std::string area;
  Primitive body;
  bool graspable = false;
  std::optional<Articulation> articulation;
  RigidTransform closed_pose;  // articulated objects only

  Vec3 handle_position() const;
};

// A task area is a solid piece of furniture standing on the floor; its top
// face is a support surface.
struct Area {
  std::string id;
  std::string label;
  Primitive furniture;

  double top() const;
  bool covers(double x, double y) const;
};

enum class CameraParent { kWrist, kChassis };

// Pinhole camera in the optical convention (x right, y down, z forward).
// Pixel (u, v) has its centre at integer coordinates.
struct CameraModel {
  std::string id;
  CameraParent parent = CameraParent::kChassis;
  RigidTransform mount_offset;  // parent frame -> optical frame
  double fx = 100.0;
  double fy = 100.0;
  double cx = 64.0;
  double cy = 48.0;
  int width = 128;
  int height = 96;
  double near = 0.05;
  double far = 6.0;

  void validate(const std::string& path) const;
};

struct Attachment {
  std::string object_id;
  RigidTransform ee_to_object;
};

struct Scene {
  std::vector<Area> areas;
  std::vector<SceneObject> objects;
  std::vector<CameraModel> cameras;
  bool floor = true;
  Color floor_color{110, 100, 90};
  Color background{24, 26, 32};
  Vec3 light_direction = Vec3(0.3, 0.2, 1.0).normalized();  // towards the light

  std::optional<Attachment> attached;
  bool handle_grasped = false;

  SceneObject* find(const std::string& id);
  const SceneObject* find(const std::string& id) const;
  const CameraModel& camera(const std::string& id) const;
  const SceneObject* drawer() const;
  SceneObject* drawer();
};

// Parses and validates a `wheelarm-scene/1` layout. SchemaError carries the
// offending key path.
Scene scene_from_json(const Json& doc);
Scene load_scene(const std::filesystem::path& path);
Scene default_scene();

// Grasp / attachment model.
inline constexpr double kGraspCloseThreshold = 0.4;
inline constexpr double kGraspReleaseThreshold = 0.2;
inline constexpr double kGraspRadius = 0.06;
inline constexpr double kSupportTolerance = 1e-6;

enum class GraspOutcome { kAttached, kHolding, kDetached, kNoCandidate, kHandleGrasped, kHandleReleased };

struct GraspResult {
  GraspOutcome outcome = GraspOutcome::kNoCandidate;
  std::string object_id;
};

const char* outcome_name(GraspOutcome outcome);

// Applies the attach/detach rule for the current EE pose (grasp point = EE
// origin) and gripper actuator positions.
GraspResult try_grasp(Scene& scene, const RigidTransform& ee_pose_world, double gripper_left,
                      double gripper_right);

// Moves any attached object rigidly with the EE.
void follow_ee(Scene& scene, const RigidTransform& ee_pose_world);

// Top of the highest support (area top, drawer top, floor) under (x, y)
// that lies at or below `z`.
double support_height_below(const Scene& scene, double x, double y, double z, const std::string& ignore_id = {});

// Slides the drawer by `delta` along its axis, clamped to its range. Throws
// OutOfReach unless the EE grasp point is within kGraspRadius of the handle.
double actuate_drawer(Scene& scene, const Vec3& ee_position_world, double delta);

}  // namespace wheelarm::scene
