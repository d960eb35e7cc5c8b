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

#include <string>
#include <vector>

#include <Eigen/Core>

#include "dataset/recording.hpp"

namespace wheelarm::dataset {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Channel-wise piecewise-linear interpolation of samples (times x channels)
// at t_ref. Exact at knots. Throws OutOfRange listing every t_ref outside
// [times.front(), times.back()].
RowMatrix interp_linear(const std::vector<double>& times, const RowMatrix& values, const std::vector<double>& t_ref);

// Quaternion rows (x, y, z, w): the source sequence is first made
// hemisphere-continuous, then interpolated component-wise and renormalized.
RowMatrix interp_quaternion(const std::vector<double>& times, const RowMatrix& quats, const std::vector<double>& t_ref);

struct AlignOptions {
  std::string reference_camera = "chassis";
};

// Resamples every topic of a raw recording onto the reference camera's
// timestamps, trimmed to the intersection of all topic spans. Throws
// EmptyTopic or NoOverlap.
Recording align_recording(const Recording& raw, const AlignOptions& options = {});

}  // namespace wheelarm::dataset
