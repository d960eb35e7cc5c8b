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

#include "dataset/align.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wheelarm::dataset {

namespace {

void check_times(const std::vector<double>& times, Eigen::Index rows) {
  if (times.empty()) fail(ErrorCode::kEmptyTopic, "interpolation source has no samples");
  if (static_cast<Eigen::Index>(times.size()) != rows) {
    fail(ErrorCode::kShapeMismatch, "timestamp count does not match the sample count");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) fail(ErrorCode::kInvalidArgument, "source timestamps must be strictly increasing");
  }
}

void check_range(const std::vector<double>& times, const std::vector<double>& t_ref) {
  std::vector<double> bad;
  for (double t : t_ref) {
    if (!(t >= times.front() && t <= times.back())) bad.push_back(t);
  }
  if (bad.empty()) return;
  std::ostringstream msg;
  msg.precision(17);
  msg << bad.size() << " reference time(s) outside [" << times.front() << ", " << times.back() << "]:";
  for (std::size_t i = 0; i < bad.size() && i < 8; ++i) msg << ' ' << bad[i];
  if (bad.size() > 8) msg << " ...";
  fail(ErrorCode::kOutOfRange, msg.str());
}

// Index i with times[i] <= t <= times[i+1] (i + 1 clamped), and the weight of i+1.
std::pair<std::size_t, double> bracket(const std::vector<double>& times, double t) {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - times.begin());
  if (hi == 0) return {0, 0.0};
  const std::size_t lo = hi - 1;
  if (times[lo] == t || hi == times.size()) return {lo, 0.0};
  return {lo, (t - times[lo]) / (times[hi] - times[lo])};
}

std::vector<double> column_times(const TopicData& t) {
  std::vector<double> out(t.rows());
  for (std::size_t r = 0; r < t.rows(); ++r) out[r] = t.time(r);
  return out;
}

RowMatrix block(const TopicData& t, std::size_t first_col, std::size_t count) {
  RowMatrix m(t.rows(), count);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < count; ++c) m(r, c) = t.at(r, first_col + c);
  }
  return m;
}

}  // namespace

RowMatrix interp_linear(const std::vector<double>& times, const RowMatrix& values, const std::vector<double>& t_ref) {
  check_times(times, values.rows());
  check_range(times, t_ref);
  RowMatrix out(static_cast<Eigen::Index>(t_ref.size()), values.cols());
  for (std::size_t k = 0; k < t_ref.size(); ++k) {
    const auto [lo, s] = bracket(times, t_ref[k]);
    if (s == 0.0) {
      out.row(k) = values.row(lo);
    } else {
      out.row(k) = (1.0 - s) * values.row(lo) + s * values.row(lo + 1);
    }
  }
  return out;
}

RowMatrix interp_quaternion(const std::vector<double>& times, const RowMatrix& quats, const std::vector<double>& t_ref) {
  if (quats.cols() != 4) fail(ErrorCode::kShapeMismatch, "quaternion blocks must have 4 columns");
  check_times(times, quats.rows());
  RowMatrix aligned = quats;
  for (Eigen::Index i = 1; i < aligned.rows(); ++i) {
    if (aligned.row(i).dot(aligned.row(i - 1)) < 0.0) aligned.row(i) *= -1.0;
  }
  RowMatrix out = interp_linear(times, aligned, t_ref);
  for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i).normalize();
  return out;
}

Recording align_recording(const Recording& raw, const AlignOptions& options) {
  const std::string ref_topic = camera_topic(options.reference_camera);
  const TopicData& reference = raw.require_topic(ref_topic);
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const TopicData& t : raw.topics) {
    raw.require_topic(t.name);
    lo = std::max(lo, t.time(0));
    hi = std::min(hi, t.time(t.rows() - 1));
  }

  std::vector<double> t_ref;
  std::vector<std::size_t> ref_rows;
  for (std::size_t r = 0; r < reference.rows(); ++r) {
    if (reference.time(r) >= lo && reference.time(r) <= hi) {
      t_ref.push_back(reference.time(r));
      ref_rows.push_back(r);
    }
  }
  if (t_ref.empty()) fail(ErrorCode::kNoOverlap, "no reference frame lies inside every topic's time span");

  Recording out;
  out.kind = "aligned";
  out.manifest = raw.manifest;
  out.meta = raw.meta;
  out.meta["reference_camera"] = options.reference_camera;
  out.meta["reference_topic"] = ref_topic;
  out.meta["trimmed_reference_frames"] = reference.rows() - t_ref.size();
  Json gaps = Json::object();

  for (const TopicData& src : raw.topics) {
    const std::vector<double> times = column_times(src);
    double max_gap = 0.0;
    for (double t : t_ref) {
      const auto it = std::upper_bound(times.begin(), times.end(), t);
      if (it != times.begin() && it != times.end()) max_gap = std::max(max_gap, *it - *(it - 1));
    }
    gaps[src.name] = max_gap;

    TopicData dst;
    dst.name = src.name;
    if (src.name.rfind("camera_", 0) == 0) {
      const std::string cam = src.name.substr(7);
      dst.columns = {"t", "frame", "source_t"};
      auto frames_it = raw.frames.find(cam);
      std::vector<Image>& images = out.frames[cam];
      for (std::size_t k = 0; k < t_ref.size(); ++k) {
        std::size_t row;
        if (src.name == ref_topic) {
          row = ref_rows[k];
        } else {
          // Nearest frame in time; ties go to the earlier one.
          const auto it = std::lower_bound(times.begin(), times.end(), t_ref[k]);
          row = static_cast<std::size_t>(it - times.begin());
          if (row == times.size() || (row > 0 && t_ref[k] - times[row - 1] <= times[row] - t_ref[k])) --row;
        }
        dst.append({t_ref[k], static_cast<double>(k), times[row]});
        if (frames_it != raw.frames.end()) {
          const auto index = static_cast<std::size_t>(src.at(row, 1));
          if (index >= frames_it->second.size()) {
            fail(ErrorCode::kSchemaMismatch, src.name + ": frame index " + std::to_string(index) + " has no image");
          }
          images.push_back(frames_it->second[index]);
        }
      }
      out.topics.push_back(std::move(dst));
      continue;
    }

    dst.columns = src.columns;
    dst.orientation_blocks = src.orientation_blocks;
    const std::size_t cols = src.cols();
    dst.values.assign(t_ref.size() * cols, 0.0);
    for (std::size_t k = 0; k < t_ref.size(); ++k) dst.values[k * cols] = t_ref[k];
    std::vector<bool> is_quat(cols, false);
    for (int b : src.orientation_blocks) {
      if (b < 1 || static_cast<std::size_t>(b) + 4 > cols) {
        fail(ErrorCode::kSchemaMismatch, src.name + ": orientation block out of range");
      }
      const RowMatrix q = interp_quaternion(times, block(src, b, 4), t_ref);
      for (std::size_t k = 0; k < t_ref.size(); ++k) {
        for (int c = 0; c < 4; ++c) dst.values[k * cols + b + c] = q(k, c);
      }
      for (int c = 0; c < 4; ++c) is_quat[b + c] = true;
    }
    const RowMatrix all = interp_linear(times, block(src, 1, cols - 1), t_ref);
    for (std::size_t c = 1; c < cols; ++c) {
      if (is_quat[c]) continue;
      for (std::size_t k = 0; k < t_ref.size(); ++k) dst.values[k * cols + c] = all(k, c - 1);
    }
    out.topics.push_back(std::move(dst));
  }
  out.meta["max_interpolation_gap_s"] = gaps;
  return out;
}

}  // namespace wheelarm::dataset
