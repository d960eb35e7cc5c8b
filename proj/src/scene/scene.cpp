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

#include "scene/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "common/embedded.hpp"

namespace wheelarm::scene {

namespace {

std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

Shape parse_shape(const std::string& name, const std::string& path) {
  if (name == "box") return Shape::kBox;
  if (name == "cylinder") return Shape::kCylinder;
  if (name == "sphere") return Shape::kSphere;
  fail(ErrorCode::kSchemaError, path + ": unknown shape '" + name + "'");
}

Color parse_color(const Json& obj, const std::string& key, const std::string& path, Color fallback) {
  if (!obj.contains(key)) return fallback;
  const auto c = require_numbers(obj, key, path, 3);
  Color out{};
  for (int i = 0; i < 3; ++i) {
    if (c[i] < 0.0 || c[i] > 255.0) fail(ErrorCode::kSchemaError, path + "." + key + ": channel outside [0, 255]");
    out[i] = static_cast<std::uint8_t>(std::lround(c[i]));
  }
  return out;
}

Vec3 parse_vec3(const Json& obj, const std::string& key, const std::string& path) {
  const auto v = require_numbers(obj, key, path, 3);
  return Vec3(v[0], v[1], v[2]);
}

void check_dimensions(const Primitive& p, const std::string& path) {
  const std::size_t expected = p.shape == Shape::kBox ? 3 : p.shape == Shape::kCylinder ? 2 : 1;
  if (p.dimensions.size() != expected) {
    fail(ErrorCode::kSchemaError, path + ".dimensions: expected " + std::to_string(expected) + " values");
  }
  for (std::size_t i = 0; i < p.dimensions.size(); ++i) {
    if (!(p.dimensions[i] > 0.0)) fail(ErrorCode::kSchemaError, at(path + ".dimensions", i) + ": must be > 0");
  }
}

RigidTransform transform_from_rows(const Json& rows, const std::string& path) {
  if (!rows.is_array() || rows.size() != 4) fail(ErrorCode::kSchemaError, path + ": expected 4x4 rows");
  kin::Mat4 m;
  for (int r = 0; r < 4; ++r) {
    if (!rows[r].is_array() || rows[r].size() != 4) fail(ErrorCode::kSchemaError, path + ": expected 4x4 rows");
    for (int c = 0; c < 4; ++c) {
      if (!rows[r][c].is_number()) fail(ErrorCode::kSchemaError, path + ": non-numeric entry");
      m(r, c) = rows[r][c].get<double>();
    }
  }
  RigidTransform t = RigidTransform::from_matrix(m);
  if (!t.is_valid(1e-6)) fail(ErrorCode::kSchemaError, path + ": not a rigid transform");
  return t;
}

SceneObject parse_object(const Json& j, const std::string& path) {
  SceneObject o;
  o.id = require_string(j, "id", path);
  o.area = j.value("area", std::string());
  o.body.shape = parse_shape(require_string(j, "shape", path), path + ".shape");
  o.body.dimensions = require_numbers(j, "dimensions", path);
  check_dimensions(o.body, path);
  o.body.pose_world = RigidTransform::from_rotation(kin::rotation_about(2, number_or(j, "yaw", 0.0, path)));
  o.body.pose_world.translation = parse_vec3(j, "position", path);
  o.body.color = parse_color(j, "color", path, o.body.color);
  if (j.contains("graspable")) {
    if (!j["graspable"].is_boolean()) fail(ErrorCode::kSchemaError, path + ".graspable: expected a boolean");
    o.graspable = j["graspable"].get<bool>();
  }
  if (j.contains("articulation")) {
    const std::string ap = path + ".articulation";
    const Json& a = j["articulation"];
    Articulation art;
    art.axis = parse_vec3(a, "axis", ap);
    if (!(art.axis.norm() > 0.0)) fail(ErrorCode::kSchemaError, ap + ".axis: must be non-zero");
    art.axis.normalize();
    const auto range = require_numbers(a, "range", ap, 2);
    art.min = range[0];
    art.max = range[1];
    if (!(art.min < art.max)) fail(ErrorCode::kSchemaError, ap + ".range: min must be < max");
    art.displacement = number_or(a, "displacement", art.min, ap);
    if (art.displacement < art.min || art.displacement > art.max) {
      fail(ErrorCode::kSchemaError, ap + ".displacement: outside range");
    }
    art.handle_offset = parse_vec3(a, "handle_offset", ap);
    o.closed_pose = o.body.pose_world;
    o.body.pose_world.translation = o.closed_pose.translation + art.axis * art.displacement;
    o.articulation = art;
  }
  return o;
}

Area parse_area(const Json& j, const std::string& path) {
  Area a;
  a.id = require_string(j, "id", path);
  a.label = j.value("label", a.id);
  const auto footprint = require_numbers(j, "footprint", path, 2);
  const double height = require_number(j, "height", path);
  const auto center = require_numbers(j, "center", path, 2);
  a.furniture.shape = Shape::kBox;
  a.furniture.dimensions = {footprint[0], footprint[1], height};
  check_dimensions(a.furniture, path);
  a.furniture.pose_world.translation = Vec3(center[0], center[1], 0.5 * height);
  a.furniture.color = parse_color(j, "color", path, Color{150, 120, 90});
  return a;
}

CameraModel parse_camera(const Json& j, const std::string& path) {
  CameraModel c;
  c.id = require_string(j, "id", path);
  const std::string parent = require_string(j, "parent", path);
  if (parent == "wrist") {
    c.parent = CameraParent::kWrist;
  } else if (parent == "chassis") {
    c.parent = CameraParent::kChassis;
  } else {
    fail(ErrorCode::kSchemaError, path + ".parent: expected 'wrist' or 'chassis'");
  }
  c.mount_offset = transform_from_rows(require(j, "mount_offset", path), path + ".mount_offset");
  const Json& k = require(j, "intrinsics", path);
  c.fx = require_number(k, "fx", path + ".intrinsics");
  c.fy = require_number(k, "fy", path + ".intrinsics");
  c.cx = require_number(k, "cx", path + ".intrinsics");
  c.cy = require_number(k, "cy", path + ".intrinsics");
  if (j.contains("resolution")) {
    const auto res = require_numbers(j, "resolution", path, 2);
    c.width = static_cast<int>(res[0]);
    c.height = static_cast<int>(res[1]);
  }
  const auto range = require_numbers(j, "depth_range", path, 2);
  c.near = range[0];
  c.far = range[1];
  c.validate(path);
  return c;
}

}  // namespace

double Primitive::half_height() const {
  switch (shape) {
    case Shape::kBox: return 0.5 * dimensions[2];
    case Shape::kCylinder: return 0.5 * dimensions[1];
    case Shape::kSphere: return dimensions[0];
  }
  return 0.0;
}

Vec3 SceneObject::handle_position() const {
  if (!articulation) return body.pose_world.translation;
  return closed_pose.translation + articulation->axis * articulation->displacement + articulation->handle_offset;
}

double Area::top() const { return furniture.dimensions[2]; }

bool Area::covers(double x, double y) const {
  const Vec3& c = furniture.pose_world.translation;
  return std::abs(x - c.x()) <= 0.5 * furniture.dimensions[0] && std::abs(y - c.y()) <= 0.5 * furniture.dimensions[1];
}

void CameraModel::validate(const std::string& path) const {
  if (!(fx > 0.0) || !(fy > 0.0)) fail(ErrorCode::kSchemaError, path + ".intrinsics: fx, fy must be > 0");
  if (width <= 0 || height <= 0) fail(ErrorCode::kSchemaError, path + ".resolution: must be positive");
  if (!(near > 0.0) || !(near < far)) fail(ErrorCode::kSchemaError, path + ".depth_range: need 0 < near < far");
}

SceneObject* Scene::find(const std::string& id) {
  for (SceneObject& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

const SceneObject* Scene::find(const std::string& id) const {
  return const_cast<Scene*>(this)->find(id);
}

const CameraModel& Scene::camera(const std::string& id) const {
  for (const CameraModel& c : cameras) {
    if (c.id == id) return c;
  }
  fail(ErrorCode::kInvalidArgument, "scene has no camera '" + id + "'");
}

SceneObject* Scene::drawer() {
  for (SceneObject& o : objects) {
    if (o.articulation) return &o;
  }
  return nullptr;
}

const SceneObject* Scene::drawer() const { return const_cast<Scene*>(this)->drawer(); }

Scene scene_from_json(const Json& doc) {
  require_format(doc, kSceneFormat, "scene layout");
  Scene s;
  if (doc.contains("floor")) {
    const Json& f = doc["floor"];
    s.floor = f.value("enabled", true);
    s.floor_color = parse_color(f, "color", "floor", s.floor_color);
  }
  s.background = parse_color(doc, "background", "", s.background);
  if (doc.contains("light_direction")) {
    s.light_direction = parse_vec3(doc, "light_direction", "");
    if (!(s.light_direction.norm() > 0.0)) fail(ErrorCode::kSchemaError, "light_direction: must be non-zero");
    s.light_direction.normalize();
  }

  std::set<std::string> ids;
  const Json& areas = require(doc, "areas", "");
  if (!areas.is_array()) fail(ErrorCode::kSchemaError, "areas: expected an array");
  for (std::size_t i = 0; i < areas.size(); ++i) {
    s.areas.push_back(parse_area(areas[i], at("areas", i)));
    if (!ids.insert(s.areas.back().id).second) fail(ErrorCode::kSchemaError, at("areas", i) + ".id: duplicate");
  }
  const Json& objects = require(doc, "objects", "");
  if (!objects.is_array()) fail(ErrorCode::kSchemaError, "objects: expected an array");
  int articulated = 0;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    s.objects.push_back(parse_object(objects[i], at("objects", i)));
    if (!ids.insert(s.objects.back().id).second) fail(ErrorCode::kSchemaError, at("objects", i) + ".id: duplicate");
    if (s.objects.back().articulation) ++articulated;
  }
  if (articulated > 1) fail(ErrorCode::kSchemaError, "objects: at most one articulated object is supported");
  if (doc.contains("cameras")) {
    const Json& cams = doc["cameras"];
    if (!cams.is_array()) fail(ErrorCode::kSchemaError, "cameras: expected an array");
    for (std::size_t i = 0; i < cams.size(); ++i) s.cameras.push_back(parse_camera(cams[i], at("cameras", i)));
  }
  return s;
}

Scene load_scene(const std::filesystem::path& path) { return scene_from_json(read_json_file(path)); }

Scene default_scene() { return scene_from_json(Json::parse(embedded_file("scene.json"))); }

const char* outcome_name(GraspOutcome outcome) {
  switch (outcome) {
    case GraspOutcome::kAttached: return "attached";
    case GraspOutcome::kHolding: return "holding";
    case GraspOutcome::kDetached: return "detached";
    case GraspOutcome::kNoCandidate: return "no_candidate";
    case GraspOutcome::kHandleGrasped: return "handle_grasped";
    case GraspOutcome::kHandleReleased: return "handle_released";
  }
  return "?";
}

double support_height_below(const Scene& scene, double x, double y, double z, const std::string& ignore_id) {
  double best = scene.floor ? 0.0 : -std::numeric_limits<double>::infinity();
  for (const Area& a : scene.areas) {
    const double top = a.top();
    if (a.covers(x, y) && top <= z + kSupportTolerance) best = std::max(best, top);
  }
  if (const SceneObject* d = scene.drawer(); d != nullptr && d->id != ignore_id && d->body.shape == Shape::kBox) {
    const Vec3& c = d->body.pose_world.translation;
    const double top = c.z() + d->body.half_height();
    const Vec3 local = d->body.pose_world.rotation.transpose() * (Vec3(x, y, c.z()) - c);
    if (std::abs(local.x()) <= 0.5 * d->body.dimensions[0] && std::abs(local.y()) <= 0.5 * d->body.dimensions[1] &&
        top <= z + kSupportTolerance) {
      best = std::max(best, top);
    }
  }
  if (!std::isfinite(best)) best = 0.0;
  return best;
}

GraspResult try_grasp(Scene& scene, const RigidTransform& ee_pose_world, double gripper_left, double gripper_right) {
  const double closed = std::min(gripper_left, gripper_right);
  const double opened = std::max(gripper_left, gripper_right);
  const Vec3 grasp_point = ee_pose_world.translation;

  if (scene.attached) {
    SceneObject* obj = scene.find(scene.attached->object_id);
    if (opened < kGraspReleaseThreshold) {
      const std::string id = scene.attached->object_id;
      scene.attached.reset();
      if (obj != nullptr) {
        Vec3& p = obj->body.pose_world.translation;
        const double base = p.z() - obj->body.half_height();
        p.z() = support_height_below(scene, p.x(), p.y(), base, obj->id) + obj->body.half_height();
      }
      return {GraspOutcome::kDetached, id};
    }
    return {GraspOutcome::kHolding, scene.attached->object_id};
  }

  if (scene.handle_grasped) {
    if (opened < kGraspReleaseThreshold) {
      scene.handle_grasped = false;
      return {GraspOutcome::kHandleReleased, scene.drawer() ? scene.drawer()->id : std::string()};
    }
    return {GraspOutcome::kHolding, scene.drawer() ? scene.drawer()->id : std::string()};
  }

  if (closed < kGraspCloseThreshold) return {};

  const SceneObject* best = nullptr;
  double best_dist = kGraspRadius;
  for (const SceneObject& o : scene.objects) {
    if (!o.graspable) continue;
    const double d = (o.body.pose_world.translation - grasp_point).norm();
    if (d <= best_dist) {
      best = &o;
      best_dist = d;
    }
  }
  if (best != nullptr) {
    scene.attached = Attachment{best->id, ee_pose_world.inverse() * best->body.pose_world};
    return {GraspOutcome::kAttached, best->id};
  }
  if (const SceneObject* d = scene.drawer(); d != nullptr && (d->handle_position() - grasp_point).norm() <= kGraspRadius) {
    scene.handle_grasped = true;
    return {GraspOutcome::kHandleGrasped, d->id};
  }
  return {};
}

void follow_ee(Scene& scene, const RigidTransform& ee_pose_world) {
  if (!scene.attached) return;
  if (SceneObject* obj = scene.find(scene.attached->object_id)) {
    obj->body.pose_world = ee_pose_world * scene.attached->ee_to_object;
  }
}

double actuate_drawer(Scene& scene, const Vec3& ee_position_world, double delta) {
  SceneObject* d = scene.drawer();
  if (d == nullptr) fail(ErrorCode::kOutOfReach, "scene has no articulated drawer");
  const double dist = (d->handle_position() - ee_position_world).norm();
  if (dist > kGraspRadius) {
    fail(ErrorCode::kOutOfReach, "drawer handle is " + std::to_string(dist) + " m from the grasp point");
  }
  Articulation& art = *d->articulation;
  art.displacement = std::clamp(art.displacement + delta, art.min, art.max);
  d->body.pose_world.translation = d->closed_pose.translation + art.axis * art.displacement;
  return art.displacement;
}

}  // namespace wheelarm::scene
