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
#include <string>
#include <vector>

#include "common/json_util.hpp"
#include "learning/features.hpp"
#include "learning/model.hpp"
#include "learning/train.hpp"

namespace wheelarm::learning {

inline constexpr const char* kModelFormat = "wheelarm-model/1";

struct Model {
  TrainConfig config;
  NormStats stats;
  Params<float> params;
  Json history = Json::array();
  Json split = Json::object();
};

Model model_from_result(const TrainResult& result, const TrainConfig& cfg);
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

// Next-step predictions for a whole trajectory in original units (samples x kTargetDim, row-major).
// The trajectory is cut into consecutive chunks of sequence_length, each starting from a zero state.
std::vector<double> predict(const Model& model, const TrajectoryFeatures& traj);

struct TrajectoryMetrics {
  std::string session_id;
  std::array<double, kTargetDim> mse{};
  std::array<double, kTargetDim> mae{};
};

struct ChannelMetrics {
  std::string channel;
  double min_mse = 0.0, max_mse = 0.0, min_mae = 0.0, max_mae = 0.0;
};

struct Overlay {
  std::string session_id;
  std::vector<double> t;
  std::vector<double> predicted;  // samples x kTargetDim
  std::vector<double> truth;
};

struct EvalReport {
  std::vector<TrajectoryMetrics> trajectories;
  std::vector<ChannelMetrics> channels;
  std::vector<Overlay> overlays;
  Json meta;
};

TrajectoryMetrics trajectory_metrics(const std::string& session_id, const std::vector<double>& predicted,
                                     const std::vector<double>& truth);
std::vector<ChannelMetrics> channel_table(const std::vector<TrajectoryMetrics>& per_traj);

EvalReport evaluate(const Model& model, const std::vector<TrajectoryFeatures>& trajs);

std::string report_csv(const EvalReport& report);
void write_report(const EvalReport& report, const std::filesystem::path& csv_path);
void write_overlays(const EvalReport& report, const std::filesystem::path& dir);

}  // namespace wheelarm::learning
