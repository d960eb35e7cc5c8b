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

#include <doctest.h>

#include <cmath>

#include "common/error.hpp"
#include "scene/render.hpp"
#include "scene/scene.hpp"

using namespace wheelarm;
using namespace wheelarm::scene;

namespace {

Json minimal_layout() {
  return Json{{"format", "wheelarm-scene/1"}, {"areas", Json::array()}, {"objects", Json::array()}};
}

Scene empty_world() {
  Scene s = scene_from_json(minimal_layout());
  s.floor = false;
  return s;
}

CameraModel test_camera() {
  CameraModel c;
  c.id = "test";
  return c;
}

// Optical frame looking along world +x (z forward, x right = -y world, y down = -z world).
RigidTransform looking_along_x(const Vec3& origin) {
  RigidTransform t;
  t.rotation << 0, 0, 1, -1, 0, 0, 0, -1, 0;
  t.translation = origin;
  return t;
}

}  // namespace

TEST_CASE("default layout has four areas, thirteen objects and one drawer") {
  const Scene s = load_scene(WHEELARM_DATA_DIR "/scene.json");
  CHECK(s.areas.size() == 4);
  CHECK(s.objects.size() == 13);
  int articulated = 0;
  for (const auto& o : s.objects) articulated += o.articulation.has_value() ? 1 : 0;
  CHECK(articulated == 1);
  REQUIRE(s.drawer() != nullptr);
  CHECK(s.drawer()->id == "drawer");
  CHECK(s.find("mustard") != nullptr);
  CHECK(s.cameras.size() == 2);
  const Scene d = default_scene();
  CHECK(d.objects.size() == s.objects.size());
  for (std::size_t i = 0; i < s.objects.size(); ++i) CHECK(d.objects[i].id == s.objects[i].id);
}

TEST_CASE("objects rest on their area tops") {
  const Scene s = default_scene();
  for (const auto& o : s.objects) {
    if (o.articulation) continue;
    const Vec3& p = o.body.pose_world.translation;
    const double base = p.z() - o.body.half_height();
    CHECK_MESSAGE(std::abs(support_height_below(s, p.x(), p.y(), base + 1e-9, o.id) - base) < 1e-9, o.id);
  }
}

TEST_CASE("layout validation names the offending field") {
  CHECK(scene_from_json(minimal_layout()).objects.empty());

  Json doc = minimal_layout();
  doc["objects"].push_back(
      {{"id", "box"}, {"shape", "box"}, {"dimensions", {0.1, -0.2, 0.1}}, {"position", {0, 0, 0}}});
  try {
    scene_from_json(doc);
    FAIL("expected SchemaError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSchemaError);
    CHECK(std::string(e.what()).find("objects[0].dimensions") != std::string::npos);
  }

  doc = minimal_layout();
  doc["objects"].push_back({{"id", "a"}, {"shape", "sphere"}, {"dimensions", {0.1}}, {"position", {0, 0, 0}}});
  doc["objects"].push_back({{"id", "a"}, {"shape", "sphere"}, {"dimensions", {0.1}}, {"position", {1, 0, 0}}});
  CHECK_THROWS_AS(scene_from_json(doc), Error);

  doc = minimal_layout();
  doc["format"] = "wheelarm-scene/9";
  CHECK_THROWS_AS(scene_from_json(doc), Error);
}

TEST_CASE("render of empty space is background") {
  const Scene s = empty_world();
  const RgbdFrame f = render_rgbd(s, test_camera(), looking_along_x(Vec3::Zero()));
  REQUIRE(f.depth.size() == 128u * 96u);
  for (float d : f.depth) CHECK(d == 0.0f);
  for (std::size_t i = 0; i < f.rgb.size(); i += 3) {
    CHECK(f.rgb[i] == s.background[0]);
    CHECK(f.rgb[i + 1] == s.background[1]);
    CHECK(f.rgb[i + 2] == s.background[2]);
  }
}

TEST_CASE("sphere depth matches analytic intersection") {
  Scene s = empty_world();
  SceneObject ball;
  ball.id = "ball";
  ball.body.shape = Shape::kSphere;
  ball.body.dimensions = {0.5};
  ball.body.pose_world = RigidTransform::from_translation(Vec3(2.0, 0.0, 0.0));
  s.objects.push_back(ball);
  const CameraModel cam = test_camera();
  const RgbdFrame f = render_rgbd(s, cam, looking_along_x(Vec3::Zero()));
  CHECK(f.depth[48 * 128 + 64] == doctest::Approx(1.5).epsilon(1e-6));
  // Every hit pixel: solve |t d - c|^2 = r^2 for the ray through that pixel.
  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      const float depth = f.depth[v * cam.width + u];
      const Vec3 d((u - cam.cx) / cam.fx, (v - cam.cy) / cam.fy, 1.0);
      const Vec3 c(0.0, 0.0, 2.0);  // centre in the optical frame
      const double a = d.squaredNorm(), b = -2.0 * d.dot(c), cc = c.squaredNorm() - 0.25;
      const double disc = b * b - 4 * a * cc;
      if (disc < 0) {
        CHECK(depth == 0.0f);
      } else {
        CHECK(std::abs(depth - (-b - std::sqrt(disc)) / (2 * a)) < 1e-3);
      }
    }
  }
}

TEST_CASE("box face perpendicular to the optical axis has constant depth") {
  Scene s = empty_world();
  SceneObject wall;
  wall.id = "wall";
  wall.body.shape = Shape::kBox;
  wall.body.dimensions = {0.2, 1.0, 0.6};
  wall.body.pose_world = RigidTransform::from_translation(Vec3(1.1, 0.0, 0.0));  // near face at x = 1
  s.objects.push_back(wall);
  const RgbdFrame f = render_rgbd(s, test_camera(), looking_along_x(Vec3::Zero()));
  int covered = 0;
  for (float d : f.depth) {
    if (d == 0.0f) continue;
    ++covered;
    CHECK(std::abs(d - 1.0) < 1e-6);
  }
  // Face spans 1.0 x 0.6 m at 1 m with f = 100: about 100 x 60 pixels.
  CHECK(covered == doctest::Approx(101 * 61).epsilon(0.03));
}

TEST_CASE("cylinder intersections") {
  Primitive cyl;
  cyl.shape = Shape::kCylinder;
  cyl.dimensions = {0.5, 2.0};
  // Side hit along x from outside.
  auto side = intersect(cyl, Vec3(-3, 0, 0), Vec3(1, 0, 0), 0.0);
  REQUIRE(side);
  CHECK(side->t == doctest::Approx(2.5));
  CHECK(side->normal.isApprox(Vec3(-1, 0, 0)));
  // Cap hit from above.
  auto cap = intersect(cyl, Vec3(0.1, 0.1, 5), Vec3(0, 0, -1), 0.0);
  REQUIRE(cap);
  CHECK(cap->t == doctest::Approx(4.0));
  CHECK(cap->normal.isApprox(Vec3(0, 0, 1)));
  // Passing above the top misses.
  CHECK_FALSE(intersect(cyl, Vec3(-3, 0, 1.2), Vec3(1, 0, 0), 0.0));
}

TEST_CASE("depth values respect the camera range and renders are deterministic") {
  const Scene s = default_scene();
  const CameraModel& cam = s.camera("chassis");
  RigidTransform pose = looking_along_x(Vec3(0.0, 0.0, 1.0));
  pose.rotation = kin::rotation_about(2, -0.5) * pose.rotation;
  const RgbdFrame a = render_rgbd(s, cam, pose, 1.25);
  const RgbdFrame b = render_rgbd(s, cam, pose, 1.25);
  CHECK(a == b);
  int hits = 0;
  for (float d : a.depth) {
    if (d == 0.0f) continue;
    ++hits;
    CHECK(d >= cam.near);
    CHECK(d <= cam.far);
  }
  CHECK(hits > 0);
  const auto small = downsample_rgb(a, 32, 24);
  CHECK(small.size() == 32u * 24u * 3u);
  for (float v : small) CHECK((v >= 0.0f && v <= 1.0f));
  const auto small_depth = downsample_depth(a, 32, 24, static_cast<float>(cam.far));
  CHECK(small_depth.size() == 32u * 24u);
}

TEST_CASE("grasp attaches, carries and releases onto the support") {
  Scene s = default_scene();
  SceneObject* mustard = s.find("mustard");
  REQUIRE(mustard != nullptr);
  const Vec3 start = mustard->body.pose_world.translation;
  RigidTransform ee = RigidTransform::from_translation(start + Vec3(0.05, 0, 0));

  CHECK(try_grasp(s, ee, 0.1, 0.1).outcome == GraspOutcome::kNoCandidate);
  const GraspResult r = try_grasp(s, ee, 0.45, 0.45);
  CHECK(r.outcome == GraspOutcome::kAttached);
  CHECK(r.object_id == "mustard");

  const RigidTransform rel = ee.inverse() * mustard->body.pose_world;
  RigidTransform moved = ee;
  for (int i = 0; i < 20; ++i) {
    moved.translation += Vec3(0.01, -0.005, 0.004);
    moved.rotation = moved.rotation * kin::rotation_about(i % 3, 0.07);
    follow_ee(s, moved);
    CHECK(try_grasp(s, moved, 0.3, 0.3).outcome == GraspOutcome::kHolding);  // hysteresis
    CHECK(((moved.inverse() * mustard->body.pose_world).matrix() - rel.matrix()).norm() < 1e-12);
  }

  // Put it back upright over the table and open.
  moved.rotation.setIdentity();
  moved.translation = start + Vec3(0.05, 0.02, 0.08);
  follow_ee(s, moved);
  CHECK(try_grasp(s, moved, 0.1, 0.1).outcome == GraspOutcome::kDetached);
  CHECK_FALSE(s.attached.has_value());
  const double table_top = 0.45;
  CHECK(mustard->body.pose_world.translation.z() - mustard->body.half_height() == doctest::Approx(table_top));

  Scene far = default_scene();
  CHECK(try_grasp(far, RigidTransform::from_translation(Vec3(0, 0, 2.0)), 0.8, 0.8).outcome ==
        GraspOutcome::kNoCandidate);
}

TEST_CASE("drawer actuation clamps to its range") {
  Scene s = default_scene();
  SceneObject* d = s.drawer();
  REQUIRE(d != nullptr);
  const Vec3 handle = d->handle_position();
  CHECK(actuate_drawer(s, handle, 0.1) == doctest::Approx(0.1));
  CHECK(actuate_drawer(s, d->handle_position(), 1.0) == doctest::Approx(0.3));
  CHECK(actuate_drawer(s, d->handle_position(), -5.0) == doctest::Approx(0.0));
  try {
    actuate_drawer(s, handle + Vec3(1.0, 0, 0), 0.1);
    FAIL("expected OutOfReach");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOutOfReach);
  }
  CHECK(try_grasp(s, RigidTransform::from_translation(d->handle_position()), 0.5, 0.5).outcome ==
        GraspOutcome::kHandleGrasped);
  CHECK(s.handle_grasped);
}
