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
#include <vector>

#include <Eigen/Core>

#include "common/json_util.hpp"
#include "learning/features.hpp"

namespace wheelarm::learning {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

struct ModelDims {
  int rgb_embed = 64;
  int depth_embed = 32;
  int state_embed = 64;
  int time_embed = 16;
  int token_embed = 32;
  int fusion_hidden = 128;
  int fusion_out = 128;
  int lstm_hidden = 128;

  int fused_input() const { return rgb_embed + depth_embed + state_embed + time_embed + token_embed; }
  void validate() const;
  Json to_json() const;
  static ModelDims from_json(const Json& j);
  bool operator==(const ModelDims&) const = default;
};

enum Tensor : int {
  kRgbW,
  kRgbB,
  kDepthW,
  kDepthB,
  kStateW,
  kStateB,
  kNormGain,
  kNormBias,
  kTimeW,
  kTimeB,
  kEmbedding,
  kFuse1W,
  kFuse1B,
  kFuse2W,
  kFuse2B,
  kLstmWx,
  kLstmWh,
  kLstmB,
  kHeadW,
  kHeadB,
  kTensorCount
};

const std::array<std::string, kTensorCount>& tensor_names();
// (rows, cols) of every tensor for the given dims.
std::array<std::pair<int, int>, kTensorCount> tensor_shapes(const ModelDims& dims);

template <class T>
struct Params {
  ModelDims dims;
  std::vector<Mat<T>> t;

  static Params zeros(const ModelDims& dims);
  std::size_t count() const;
  Mat<T>& operator[](int i) { return t[static_cast<std::size_t>(i)]; }
  const Mat<T>& operator[](int i) const { return t[static_cast<std::size_t>(i)]; }

  template <class U>
  Params<U> cast() const {
    Params<U> out;
    out.dims = dims;
    for (const auto& m : t) out.t.push_back(m.template cast<U>());
    return out;
  }
};

Params<float> init_params(const ModelDims& dims, std::uint64_t seed);

// A batch of equal-length windows. Column s * batch + b holds step s of window b.
template <class T>
struct Batch {
  int steps = 0;
  int batch = 0;
  Mat<T> rgb;     // kRgbDim x steps*batch
  Mat<T> depth;   // kDepthDim x steps*batch
  Mat<T> state;   // kStateDim x steps*batch
  Mat<T> time;    // 1 x steps*batch
  Mat<T> target;  // kTargetDim x steps*batch (may be empty for inference)
  std::vector<std::vector<int>> tokens;  // one instruction per window

  void check(const ModelDims& dims, bool need_target) const;
};

template <class T>
Mat<T> forward(const Params<T>& p, const Batch<T>& b);

// Mean squared error over every target element; fills grad when given.
template <class T>
T loss_and_grad(const Params<T>& p, const Batch<T>& b, Params<T>* grad);

}  // namespace wheelarm::learning
