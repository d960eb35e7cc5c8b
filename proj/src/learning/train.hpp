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
#include <functional>
#include <string>
#include <vector>

#include "common/json_util.hpp"
#include "learning/features.hpp"
#include "learning/model.hpp"

namespace wheelarm::learning {

struct TrainConfig {
  double lr = 1e-4;
  double weight_decay = 1e-4;
  int batch = 16;
  int sequence_length = 20;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double lr_factor = 0.1;
  int lr_step = 5;
  double grad_clip = 1.0;
  int max_epochs = 100;
  double train_split = 0.8;
  double val_split = 0.2;
  int patience = 3;
  std::uint64_t seed = 0;
  std::string camera = "wrist";
  ModelDims dims;

  void validate() const;
  Json to_json() const;
  // Missing keys keep their defaults; unknown keys are a SchemaError.
  static TrainConfig from_json(const Json& j);
};

double learning_rate(const TrainConfig& cfg, int epoch);

// Scales grad in place so its global norm is at most max_norm; returns the norm before clipping.
double clip_grad_norm(Params<float>& grad, double max_norm);

struct AdamState {
  Params<float> m;
  Params<float> v;
  std::int64_t step = 0;
};

// Adam with L2 weight decay added to the (already clipped) gradient.
void adam_step(Params<float>& params, const Params<float>& grad, AdamState& state, const TrainConfig& cfg, double lr);

struct Window {
  std::size_t traj = 0;
  std::size_t start = 0;
  int length = 0;
};

std::vector<Window> make_windows(const std::vector<const TrajectoryFeatures*>& trajs, int sequence_length);

template <class T>
Batch<T> make_batch(const std::vector<const TrajectoryFeatures*>& trajs, const std::vector<Window>& windows,
                    const NormStats& stats, bool with_target = true);

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double max_grad_norm = 0.0;
};

struct TrainResult {
  Params<float> params;  // best validation epoch
  NormStats stats;
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  bool stopped_early = false;
  std::vector<std::string> train_sessions;
  std::vector<std::string> val_sessions;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

TrainResult train(const std::vector<TrajectoryFeatures>& trajs, const TrainConfig& cfg, const EpochCallback& on_epoch = {});

// Mean normalized MSE of params over every window of the given trajectories.
double validation_mse(const Params<float>& params, const std::vector<const TrajectoryFeatures*>& trajs,
                      const NormStats& stats, int sequence_length);

}  // namespace wheelarm::learning
