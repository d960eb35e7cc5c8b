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

#include "learning/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "common/error.hpp"

namespace wheelarm::learning {

namespace {

constexpr int kEvalBatch = 64;

template <class V>
void read_field(const Json& j, const char* key, V& out) {
  if (j.contains(key)) out = j.at(key).get<V>();
}

// Groups windows by length and chunks each group; equal lengths share a batch.
std::vector<std::vector<Window>> chunk(const std::vector<Window>& windows, int batch) {
  std::map<int, std::vector<Window>, std::greater<>> groups;
  for (const Window& w : windows) groups[w.length].push_back(w);
  std::vector<std::vector<Window>> out;
  for (auto& [len, ws] : groups) {
    for (std::size_t i = 0; i < ws.size(); i += static_cast<std::size_t>(batch)) {
      out.emplace_back(ws.begin() + static_cast<std::ptrdiff_t>(i),
                       ws.begin() + static_cast<std::ptrdiff_t>(std::min(ws.size(), i + static_cast<std::size_t>(batch))));
    }
  }
  return out;
}

}  // namespace

void TrainConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) fail(ErrorCode::kInvalidArgument, std::string("train config: ") + name + " must be positive");
  };
  positive(lr, "lr");
  positive(weight_decay, "weight_decay");
  positive(batch, "batch");
  positive(sequence_length, "sequence_length");
  positive(beta1, "beta1");
  positive(beta2, "beta2");
  positive(eps, "eps");
  positive(lr_factor, "lr_factor");
  positive(lr_step, "lr_step");
  positive(grad_clip, "grad_clip");
  positive(max_epochs, "max_epochs");
  positive(train_split, "train_split");
  positive(val_split, "val_split");
  positive(patience, "patience");
  if (beta1 >= 1.0 || beta2 >= 1.0) fail(ErrorCode::kInvalidArgument, "train config: betas must be below 1");
  if (std::abs(train_split + val_split - 1.0) > 1e-12) {
    fail(ErrorCode::kInvalidArgument, "train config: train_split + val_split must equal 1");
  }
  if (camera.empty()) fail(ErrorCode::kInvalidArgument, "train config: camera must be set");
  dims.validate();
}

Json TrainConfig::to_json() const {
  return Json{{"lr", lr},
              {"weight_decay", weight_decay},
              {"batch", batch},
              {"sequence_length", sequence_length},
              {"beta1", beta1},
              {"beta2", beta2},
              {"eps", eps},
              {"lr_factor", lr_factor},
              {"lr_step", lr_step},
              {"grad_clip", grad_clip},
              {"max_epochs", max_epochs},
              {"train_split", train_split},
              {"val_split", val_split},
              {"patience", patience},
              {"seed", seed},
              {"camera", camera},
              {"dims", dims.to_json()}};
}

TrainConfig TrainConfig::from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::kSchemaError, "train config must be a JSON object");
  static const std::set<std::string> known = {
      "lr",        "weight_decay", "batch",       "sequence_length", "beta1", "beta2",    "eps",    "lr_factor",
      "lr_step",   "grad_clip",    "max_epochs",  "train_split",     "val_split", "patience", "seed", "camera",
      "dims"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) fail(ErrorCode::kSchemaError, "train config: unknown key " + key);
  }
  TrainConfig c;
  try {
    read_field(j, "lr", c.lr);
    read_field(j, "weight_decay", c.weight_decay);
    read_field(j, "batch", c.batch);
    read_field(j, "sequence_length", c.sequence_length);
    read_field(j, "beta1", c.beta1);
    read_field(j, "beta2", c.beta2);
    read_field(j, "eps", c.eps);
    read_field(j, "lr_factor", c.lr_factor);
    read_field(j, "lr_step", c.lr_step);
    read_field(j, "grad_clip", c.grad_clip);
    read_field(j, "max_epochs", c.max_epochs);
    read_field(j, "train_split", c.train_split);
    read_field(j, "val_split", c.val_split);
    read_field(j, "patience", c.patience);
    read_field(j, "seed", c.seed);
    read_field(j, "camera", c.camera);
  } catch (const Json::exception& e) {
    fail(ErrorCode::kSchemaError, std::string("train config: ") + e.what());
  }
  if (j.contains("dims")) {
    ModelDims d = c.dims;
    Json merged = d.to_json();
    for (const auto& [key, value] : j.at("dims").items()) merged[key] = value;
    c.dims = ModelDims::from_json(merged);
  }
  c.validate();
  return c;
}

double learning_rate(const TrainConfig& cfg, int epoch) {
  return cfg.lr * std::pow(cfg.lr_factor, epoch / cfg.lr_step);
}

double clip_grad_norm(Params<float>& grad, double max_norm) {
  double sq = 0.0;
  for (const auto& m : grad.t) sq += m.template cast<double>().squaredNorm();
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const auto scale = static_cast<float>(max_norm / (norm + 1e-6));
    for (auto& m : grad.t) m *= scale;
  }
  return norm;
}

void adam_step(Params<float>& params, const Params<float>& grad, AdamState& state, const TrainConfig& cfg, double lr) {
  if (state.m.t.empty()) {
    state.m = Params<float>::zeros(params.dims);
    state.v = Params<float>::zeros(params.dims);
  }
  ++state.step;
  const auto b1 = static_cast<float>(cfg.beta1);
  const auto b2 = static_cast<float>(cfg.beta2);
  const auto wd = static_cast<float>(cfg.weight_decay);
  const auto c1 = static_cast<float>(1.0 - std::pow(cfg.beta1, static_cast<double>(state.step)));
  const auto c2 = static_cast<float>(1.0 - std::pow(cfg.beta2, static_cast<double>(state.step)));
  const auto step = static_cast<float>(lr);
  const auto eps = static_cast<float>(cfg.eps);
  for (int i = 0; i < kTensorCount; ++i) {
    const Mat<float> g = grad[i] + wd * params[i];
    state.m[i] = b1 * state.m[i] + (1.0f - b1) * g;
    state.v[i] = b2 * state.v[i] + (1.0f - b2) * g.cwiseProduct(g);
    params[i].array() -= step * (state.m[i].array() / c1) / ((state.v[i].array() / c2).sqrt() + eps);
  }
}

std::vector<Window> make_windows(const std::vector<const TrajectoryFeatures*>& trajs, int sequence_length) {
  std::vector<Window> out;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const std::size_t n = trajs[i]->samples();
    if (n == 0) continue;
    if (n < static_cast<std::size_t>(sequence_length)) {
      out.push_back({i, 0, static_cast<int>(n)});
      continue;
    }
    for (std::size_t s = 0; s + static_cast<std::size_t>(sequence_length) <= n; ++s) {
      out.push_back({i, s, sequence_length});
    }
  }
  return out;
}

template <class T>
Batch<T> make_batch(const std::vector<const TrajectoryFeatures*>& trajs, const std::vector<Window>& windows,
                    const NormStats& stats, bool with_target) {
  if (windows.empty()) fail(ErrorCode::kInvalidArgument, "empty batch");
  Batch<T> b;
  b.steps = windows.front().length;
  b.batch = static_cast<int>(windows.size());
  const Eigen::Index n = static_cast<Eigen::Index>(b.steps) * b.batch;
  b.rgb.resize(kRgbDim, n);
  b.depth.resize(kDepthDim, n);
  b.state.resize(kStateDim, n);
  b.time.resize(1, n);
  if (with_target) b.target.resize(kTargetDim, n);
  for (int j = 0; j < b.batch; ++j) {
    const Window& w = windows[static_cast<std::size_t>(j)];
    if (w.length != b.steps) fail(ErrorCode::kShapeMismatch, "windows in one batch must share a length");
    const TrajectoryFeatures& f = *trajs[w.traj];
    b.tokens.push_back(f.tokens);
    for (int s = 0; s < b.steps; ++s) {
      const std::size_t r = w.start + static_cast<std::size_t>(s);
      const Eigen::Index col = static_cast<Eigen::Index>(s) * b.batch + j;
      for (int k = 0; k < kRgbDim; ++k) b.rgb(k, col) = static_cast<T>(f.rgb[r * kRgbDim + k]);
      for (int k = 0; k < kDepthDim; ++k) b.depth(k, col) = static_cast<T>(f.depth[r * kDepthDim + k] * stats.depth_scale);
      for (int k = 0; k < kStateDim; ++k) {
        b.state(k, col) = static_cast<T>((f.state[r * kStateDim + k] - stats.state_mean[k]) / stats.state_std[k]);
      }
      b.time(0, col) = static_cast<T>((f.timestamp[r] - stats.time_mean) / stats.time_std);
      if (with_target) {
        for (int k = 0; k < kTargetDim; ++k) {
          b.target(k, col) = static_cast<T>((f.target[r * kTargetDim + k] - stats.target_mean[k]) / stats.target_std[k]);
        }
      }
    }
  }
  return b;
}

template Batch<float> make_batch(const std::vector<const TrajectoryFeatures*>&, const std::vector<Window>&,
                                 const NormStats&, bool);
template Batch<double> make_batch(const std::vector<const TrajectoryFeatures*>&, const std::vector<Window>&,
                                  const NormStats&, bool);

double validation_mse(const Params<float>& params, const std::vector<const TrajectoryFeatures*>& trajs,
                      const NormStats& stats, int sequence_length) {
  double sum = 0.0;
  double elems = 0.0;
  for (const auto& batch : chunk(make_windows(trajs, sequence_length), kEvalBatch)) {
    const Batch<float> b = make_batch<float>(trajs, batch, stats);
    const double n = static_cast<double>(b.target.size());
    sum += static_cast<double>(loss_and_grad<float>(params, b, nullptr)) * n;
    elems += n;
  }
  if (elems == 0.0) fail(ErrorCode::kInsufficientData, "no validation windows");
  return sum / elems;
}

TrainResult train(const std::vector<TrajectoryFeatures>& trajs, const TrainConfig& cfg, const EpochCallback& on_epoch) {
  cfg.validate();
  if (trajs.size() < 2) fail(ErrorCode::kInsufficientData, "training needs at least 2 trajectories");
  std::mt19937_64 rng(cfg.seed);

  std::vector<std::size_t> order(trajs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  auto n_val = static_cast<std::size_t>(std::llround(cfg.val_split * static_cast<double>(trajs.size())));
  n_val = std::clamp<std::size_t>(n_val, 1, trajs.size() - 1);
  std::vector<const TrajectoryFeatures*> train_set, val_set;
  TrainResult result;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const TrajectoryFeatures* f = &trajs[order[i]];
    if (i < n_val) {
      val_set.push_back(f);
      result.val_sessions.push_back(f->session_id);
    } else {
      train_set.push_back(f);
      result.train_sessions.push_back(f->session_id);
    }
  }
  result.stats = compute_stats(train_set);

  std::vector<Window> windows = make_windows(train_set, cfg.sequence_length);
  if (windows.empty()) fail(ErrorCode::kInsufficientData, "no training windows");

  Params<float> params = init_params(cfg.dims, rng());
  result.params = params;
  AdamState adam;
  Params<float> grad = Params<float>::zeros(cfg.dims);
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = learning_rate(cfg, epoch);
    std::shuffle(windows.begin(), windows.end(), rng);
    double loss_sum = 0.0;
    double elems = 0.0;
    for (const auto& batch : chunk(windows, cfg.batch)) {
      const Batch<float> b = make_batch<float>(train_set, batch, result.stats);
      const double n = static_cast<double>(b.target.size());
      loss_sum += static_cast<double>(loss_and_grad<float>(params, b, &grad)) * n;
      elems += n;
      rec.max_grad_norm = std::max(rec.max_grad_norm, clip_grad_norm(grad, cfg.grad_clip));
      adam_step(params, grad, adam, cfg, rec.lr);
    }
    rec.train_loss = loss_sum / elems;
    rec.val_loss = validation_mse(params, val_set, result.stats, cfg.sequence_length);
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (rec.val_loss < best) {
      best = rec.val_loss;
      result.best_epoch = epoch;
      result.params = params;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      result.stopped_early = true;
      break;
    }
  }
  return result;
}

}  // namespace wheelarm::learning
