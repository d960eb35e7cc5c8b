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

#include "scene/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wheelarm::scene {

namespace {

constexpr double kAmbient = 0.25;
constexpr double kDiffuse = 0.75;

std::optional<Hit> intersect_box(const Vec3& half, const Vec3& o, const Vec3& d, double t_min) {
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  int near_axis = -1;
  double near_sign = 0.0;
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) {
      if (o[a] < -half[a] || o[a] > half[a]) return std::nullopt;
      continue;
    }
    double t0 = (-half[a] - o[a]) / d[a];
    double t1 = (half[a] - o[a]) / d[a];
    double sign = -1.0;  // entering through the -half face
    if (t0 > t1) {
      std::swap(t0, t1);
      sign = 1.0;
    }
    if (t0 > t_near) {
      t_near = t0;
      near_axis = a;
      near_sign = sign;
    }
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return std::nullopt;
  }
  if (near_axis < 0) return std::nullopt;
  Hit h;
  if (t_near >= t_min) {
    h.t = t_near;
    h.normal = Vec3::Zero();
    h.normal[near_axis] = near_sign;
    return h;
  }
  return std::nullopt;
}

std::optional<Hit> intersect_sphere(double r, const Vec3& o, const Vec3& d, double t_min) {
  const double a = d.squaredNorm();
  const double b = o.dot(d);
  const double c = o.squaredNorm() - r * r;
  const double disc = b * b - a * c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  for (double t : {(-b - sq) / a, (-b + sq) / a}) {
    if (t >= t_min) {
      Hit h;
      h.t = t;
      h.normal = (o + t * d) / r;
      return h;
    }
  }
  return std::nullopt;
}

std::optional<Hit> intersect_cylinder(double r, double height, const Vec3& o, const Vec3& d, double t_min) {
  const double hz = 0.5 * height;
  std::optional<Hit> best;
  auto consider = [&](double t, const Vec3& n) {
    if (t >= t_min && (!best || t < best->t)) {
      best = Hit{t, n, {}};
    }
  };
  const double a = d.x() * d.x() + d.y() * d.y();
  if (a > 0.0) {
    const double b = o.x() * d.x() + o.y() * d.y();
    const double c = o.x() * o.x() + o.y() * o.y() - r * r;
    const double disc = b * b - a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (double t : {(-b - sq) / a, (-b + sq) / a}) {
        const Vec3 p = o + t * d;
        if (std::abs(p.z()) <= hz) consider(t, Vec3(p.x() / r, p.y() / r, 0.0));
      }
    }
  }
  if (d.z() != 0.0) {
    for (double cap : {-hz, hz}) {
      const double t = (cap - o.z()) / d.z();
      const Vec3 p = o + t * d;
      if (p.x() * p.x() + p.y() * p.y() <= r * r) consider(t, Vec3(0.0, 0.0, cap > 0.0 ? 1.0 : -1.0));
    }
  }
  return best;
}

std::uint8_t shade(std::uint8_t base, double intensity) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(base * intensity), 0L, 255L));
}

}  // namespace

std::optional<Hit> intersect(const Primitive& p, const Vec3& origin, const Vec3& dir, double t_min) {
  // Rigid change of frame keeps the ray parameter t.
  const kin::Mat3 rt = p.pose_world.rotation.transpose();
  const Vec3 o = rt * (origin - p.pose_world.translation);
  const Vec3 d = rt * dir;
  std::optional<Hit> hit;
  switch (p.shape) {
    case Shape::kBox:
      hit = intersect_box(0.5 * Vec3(p.dimensions[0], p.dimensions[1], p.dimensions[2]), o, d, t_min);
      break;
    case Shape::kCylinder:
      hit = intersect_cylinder(p.dimensions[0], p.dimensions[1], o, d, t_min);
      break;
    case Shape::kSphere:
      hit = intersect_sphere(p.dimensions[0], o, d, t_min);
      break;
  }
  if (hit) {
    hit->normal = p.pose_world.rotation * hit->normal;
    hit->color = p.color;
  }
  return hit;
}

RgbdFrame render_rgbd(const Scene& scene, const CameraModel& camera, const RigidTransform& camera_world,
                      double timestamp) {
  RgbdFrame f;
  f.camera_id = camera.id;
  f.timestamp = timestamp;
  f.width = camera.width;
  f.height = camera.height;
  f.rgb.assign(static_cast<std::size_t>(camera.width) * camera.height * 3, 0);
  f.depth.assign(static_cast<std::size_t>(camera.width) * camera.height, 0.0f);

  std::vector<const Primitive*> prims;
  for (const Area& a : scene.areas) prims.push_back(&a.furniture);
  for (const SceneObject& o : scene.objects) prims.push_back(&o.body);

  const Vec3& origin = camera_world.translation;
  for (int v = 0; v < camera.height; ++v) {
    for (int u = 0; u < camera.width; ++u) {
      const Vec3 dir_cam((u - camera.cx) / camera.fx, (v - camera.cy) / camera.fy, 1.0);
      const Vec3 dir = camera_world.rotation * dir_cam;
      std::optional<Hit> best;
      for (const Primitive* p : prims) {
        auto h = intersect(*p, origin, dir, camera.near);
        if (h && (!best || h->t < best->t)) best = h;
      }
      if (scene.floor && dir.z() < 0.0) {
        const double t = -origin.z() / dir.z();
        if (t >= camera.near && (!best || t < best->t)) best = Hit{t, Vec3::UnitZ(), scene.floor_color};
      }
      const std::size_t idx = static_cast<std::size_t>(v) * camera.width + u;
      Color out = scene.background;
      if (best && best->t <= camera.far) {
        Vec3 n = best->normal;
        if (n.dot(dir) > 0.0) n = -n;
        const double intensity = kAmbient + kDiffuse * std::max(0.0, n.dot(scene.light_direction));
        for (int c = 0; c < 3; ++c) out[c] = shade(best->color[c], intensity);
        f.depth[idx] = static_cast<float>(best->t);
      }
      std::copy(out.begin(), out.end(), f.rgb.begin() + static_cast<std::ptrdiff_t>(idx * 3));
    }
  }
  return f;
}

std::vector<float> downsample_rgb(const RgbdFrame& frame, int out_width, int out_height) {
  const int bx = frame.width / out_width;
  const int by = frame.height / out_height;
  std::vector<float> out(static_cast<std::size_t>(out_width) * out_height * 3, 0.0f);
  const float scale = 1.0f / (255.0f * static_cast<float>(bx * by));
  for (int v = 0; v < out_height; ++v) {
    for (int u = 0; u < out_width; ++u) {
      for (int c = 0; c < 3; ++c) {
        int sum = 0;
        for (int dy = 0; dy < by; ++dy) {
          for (int dx = 0; dx < bx; ++dx) {
            const std::size_t src = (static_cast<std::size_t>(v * by + dy) * frame.width + (u * bx + dx)) * 3 + c;
            sum += frame.rgb[src];
          }
        }
        out[(static_cast<std::size_t>(v) * out_width + u) * 3 + c] = static_cast<float>(sum) * scale;
      }
    }
  }
  return out;
}

std::vector<float> downsample_depth(const RgbdFrame& frame, int out_width, int out_height, float far) {
  const int bx = frame.width / out_width;
  const int by = frame.height / out_height;
  std::vector<float> out(static_cast<std::size_t>(out_width) * out_height, 0.0f);
  for (int v = 0; v < out_height; ++v) {
    for (int u = 0; u < out_width; ++u) {
      double sum = 0.0;
      for (int dy = 0; dy < by; ++dy) {
        for (int dx = 0; dx < bx; ++dx) {
          float d = frame.depth[static_cast<std::size_t>(v * by + dy) * frame.width + (u * bx + dx)];
          // No-hit pixels read as "far away".
          if (d <= 0.0f || d > far) d = far;
          sum += d;
        }
      }
      out[static_cast<std::size_t>(v) * out_width + u] = static_cast<float>(sum / (bx * by));
    }
  }
  return out;
}

}  // namespace wheelarm::scene
