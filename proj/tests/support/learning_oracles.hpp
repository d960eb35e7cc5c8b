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

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "learning/features.hpp"
#include "learning/model.hpp"

namespace wheelarm::oracle {

// Smooth synthetic trajectory with the dataset's feature layout.
inline learning::TrajectoryFeatures synthetic_trajectory(std::size_t n, std::uint64_t seed,
                                                         const std::string& instruction = "pick up the mustard") {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  learning::TrajectoryFeatures f;
  f.session_id = "synthetic-" + std::to_string(seed);
  f.tokens = learning::tokenize(instruction);
  const double phase = u(rng) * 6.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 0.1 * static_cast<double>(k);
    f.timestamp.push_back(t);
    for (int c = 0; c < learning::kStateDim; ++c) f.state.push_back(std::sin(0.3 * t * (1 + c % 5) + phase + c));
    for (int c = 0; c < learning::kTargetDim; ++c) {
      f.target.push_back(std::sin(0.3 * (t + 0.1) * (1 + c % 5) + phase + c));
    }
    for (int c = 0; c < learning::kRgbDim; ++c) f.rgb.push_back(static_cast<float>(u(rng)));
    for (int c = 0; c < learning::kDepthDim; ++c) f.depth.push_back(static_cast<float>(0.5 + 5.0 * u(rng)));
  }
  return f;
}

struct GradCheck {
  double max_rel_error = 0.0;
  int checked = 0;
  std::vector<int> per_tensor;
};

// Central differences of the float64 loss against the analytic gradient, sampling
// entries from every tensor. Embedding entries are drawn from the columns the batch uses.
inline GradCheck finite_difference_check(learning::Params<double> p, const learning::Batch<double>& b, int samples,
                                         std::uint64_t seed, double h = 1e-5) {
  using namespace learning;
  Params<double> grad = Params<double>::zeros(p.dims);
  loss_and_grad<double>(p, b, &grad);
  std::mt19937_64 rng(seed);
  std::vector<int> used;
  for (const auto& toks : b.tokens) used.insert(used.end(), toks.begin(), toks.end());
  GradCheck out;
  out.per_tensor.assign(kTensorCount, 0);
  for (int s = 0; s < samples; ++s) {
    const int ti = s % kTensorCount;
    Mat<double>& m = p[ti];
    Eigen::Index r = std::uniform_int_distribution<Eigen::Index>(0, m.rows() - 1)(rng);
    Eigen::Index c = std::uniform_int_distribution<Eigen::Index>(0, m.cols() - 1)(rng);
    if (ti == kEmbedding && !used.empty()) c = used[std::uniform_int_distribution<std::size_t>(0, used.size() - 1)(rng)];
    const double keep = m(r, c);
    m(r, c) = keep + h;
    const double up = loss_and_grad<double>(p, b, nullptr);
    m(r, c) = keep - h;
    const double down = loss_and_grad<double>(p, b, nullptr);
    m(r, c) = keep;
    const double numeric = (up - down) / (2.0 * h);
    const double analytic = grad[ti](r, c);
    const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
    out.max_rel_error = std::max(out.max_rel_error, std::abs(numeric - analytic) / denom);
    ++out.checked;
    ++out.per_tensor[static_cast<std::size_t>(ti)];
  }
  return out;
}

}  // namespace wheelarm::oracle
