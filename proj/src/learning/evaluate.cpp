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

#include "learning/evaluate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "common/codec.hpp"
#include "common/error.hpp"

namespace wheelarm::learning {

namespace fs = std::filesystem;

namespace {

std::string encode_tensor(const Mat<float>& m) {
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(m.size()) * sizeof(float));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    std::uint32_t bits;
    const float v = m.data()[i];
    std::memcpy(&bits, &v, sizeof bits);
    for (int k = 0; k < 4; ++k) bytes[static_cast<std::size_t>(i) * 4 + k] = static_cast<std::uint8_t>(bits >> (8 * k));
  }
  return base64_encode(bytes);
}

void decode_tensor(const std::string& text, Mat<float>& m, const std::string& name) {
  const std::vector<std::uint8_t> bytes = base64_decode(text);
  if (bytes.size() != static_cast<std::size_t>(m.size()) * sizeof(float)) {
    fail(ErrorCode::kSchemaMismatch, "model tensor " + name + " has the wrong byte length");
  }
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    std::uint32_t bits = 0;
    for (int k = 0; k < 4; ++k) bits |= static_cast<std::uint32_t>(bytes[static_cast<std::size_t>(i) * 4 + k]) << (8 * k);
    float v;
    std::memcpy(&v, &bits, sizeof v);
    m.data()[i] = v;
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot create " + path.string());
  out << text;
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

Model model_from_result(const TrainResult& result, const TrainConfig& cfg) {
  Model m;
  m.config = cfg;
  m.stats = result.stats;
  m.params = result.params;
  for (const EpochRecord& r : result.history) {
    m.history.push_back(Json{{"epoch", r.epoch},
                             {"lr", r.lr},
                             {"train_loss", r.train_loss},
                             {"val_loss", r.val_loss},
                             {"max_grad_norm", r.max_grad_norm}});
  }
  m.split = Json{{"train", result.train_sessions},
                 {"validation", result.val_sessions},
                 {"best_epoch", result.best_epoch},
                 {"stopped_early", result.stopped_early}};
  return m;
}

void save_model(const Model& model, const fs::path& path) {
  Json tensors = Json::array();
  for (int i = 0; i < kTensorCount; ++i) {
    const Mat<float>& m = model.params[i];
    tensors.push_back(Json{{"name", tensor_names()[static_cast<std::size_t>(i)]},
                           {"rows", m.rows()},
                           {"cols", m.cols()},
                           {"data", encode_tensor(m)}});
  }
  const Json j{{"format", kModelFormat},
               {"dtype", "float32"},
               {"byte_order", "little"},
               {"layout", "column-major"},
               {"dims", model.params.dims.to_json()},
               {"parameter_count", model.params.count()},
               {"config", model.config.to_json()},
               {"seed", model.config.seed},
               {"normalization", model.stats.to_json()},
               {"history", model.history},
               {"split", model.split},
               {"tensors", tensors}};
  write_text(path, j.dump(1) + "\n");
}

Model load_model(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorCode::kSchemaError, path.string() + ": " + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kModelFormat) {
    fail(ErrorCode::kSchemaMismatch, path.string() + ": not a " + std::string(kModelFormat) + " file");
  }
  Model m;
  try {
    m.config = TrainConfig::from_json(j.at("config"));
    m.stats = NormStats::from_json(j.at("normalization"));
    m.history = j.value("history", Json::array());
    m.split = j.value("split", Json::object());
    m.params = Params<float>::zeros(ModelDims::from_json(j.at("dims")));
    const Json& tensors = j.at("tensors");
    if (!tensors.is_array() || tensors.size() != static_cast<std::size_t>(kTensorCount)) {
      fail(ErrorCode::kSchemaMismatch, "model file must hold " + std::to_string(kTensorCount) + " tensors");
    }
    for (int i = 0; i < kTensorCount; ++i) {
      const Json& t = tensors[static_cast<std::size_t>(i)];
      const std::string& name = tensor_names()[static_cast<std::size_t>(i)];
      Mat<float>& dst = m.params[i];
      if (t.at("name").get<std::string>() != name || t.at("rows").get<Eigen::Index>() != dst.rows() ||
          t.at("cols").get<Eigen::Index>() != dst.cols()) {
        fail(ErrorCode::kSchemaMismatch, "model tensor " + std::to_string(i) + " does not match " + name);
      }
      decode_tensor(t.at("data").get<std::string>(), dst, name);
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::kSchemaError, path.string() + ": " + e.what());
  }
  return m;
}

std::vector<double> predict(const Model& model, const TrajectoryFeatures& traj) {
  const std::vector<const TrajectoryFeatures*> one = {&traj};
  const std::size_t n = traj.samples();
  const auto len = static_cast<std::size_t>(model.config.sequence_length);
  std::vector<double> out(n * kTargetDim);
  for (std::size_t start = 0; start < n; start += len) {
    const Window w{0, start, static_cast<int>(std::min(len, n - start))};
    const Mat<float> y = forward<float>(model.params, make_batch<float>(one, {w}, model.stats, false));
    for (int s = 0; s < w.length; ++s) {
      for (int k = 0; k < kTargetDim; ++k) {
        out[(start + static_cast<std::size_t>(s)) * kTargetDim + k] =
            static_cast<double>(y(k, s)) * model.stats.target_std[k] + model.stats.target_mean[k];
      }
    }
  }
  return out;
}

TrajectoryMetrics trajectory_metrics(const std::string& session_id, const std::vector<double>& predicted,
                                     const std::vector<double>& truth) {
  if (predicted.size() != truth.size() || truth.empty() || truth.size() % kTargetDim != 0) {
    fail(ErrorCode::kShapeMismatch, "predictions and targets must be non-empty samples x 16");
  }
  TrajectoryMetrics m;
  m.session_id = session_id;
  const std::size_t n = truth.size() / kTargetDim;
  for (std::size_t r = 0; r < n; ++r) {
    for (int k = 0; k < kTargetDim; ++k) {
      const double e = predicted[r * kTargetDim + k] - truth[r * kTargetDim + k];
      m.mse[k] += e * e;
      m.mae[k] += std::abs(e);
    }
  }
  for (int k = 0; k < kTargetDim; ++k) {
    m.mse[k] /= static_cast<double>(n);
    m.mae[k] /= static_cast<double>(n);
  }
  return m;
}

std::vector<ChannelMetrics> channel_table(const std::vector<TrajectoryMetrics>& per_traj) {
  if (per_traj.empty()) fail(ErrorCode::kInsufficientData, "no trajectories to evaluate");
  std::vector<ChannelMetrics> out;
  for (int k = 0; k < kTargetDim; ++k) {
    ChannelMetrics c;
    c.channel = target_channel_names()[static_cast<std::size_t>(k)];
    c.min_mse = c.max_mse = per_traj.front().mse[k];
    c.min_mae = c.max_mae = per_traj.front().mae[k];
    for (const auto& t : per_traj) {
      c.min_mse = std::min(c.min_mse, t.mse[k]);
      c.max_mse = std::max(c.max_mse, t.mse[k]);
      c.min_mae = std::min(c.min_mae, t.mae[k]);
      c.max_mae = std::max(c.max_mae, t.mae[k]);
    }
    out.push_back(c);
  }
  return out;
}

EvalReport evaluate(const Model& model, const std::vector<TrajectoryFeatures>& trajs) {
  EvalReport r;
  for (const TrajectoryFeatures& f : trajs) {
    Overlay o;
    o.session_id = f.session_id;
    o.t = f.timestamp;
    o.predicted = predict(model, f);
    o.truth = f.target;
    r.trajectories.push_back(trajectory_metrics(f.session_id, o.predicted, o.truth));
    r.overlays.push_back(std::move(o));
  }
  r.channels = channel_table(r.trajectories);
  Json sessions = Json::array();
  for (const auto& t : r.trajectories) sessions.push_back(t.session_id);
  r.meta = Json{{"format", "wheelarm-report/1"},
                {"model_format", kModelFormat},
                {"training_loss_space", "normalized"},
                {"metric_space", "original units"},
                {"quaternions_renormalized", false},
                {"sequence_length", model.config.sequence_length},
                {"trajectories", sessions}};
  return r;
}

std::string report_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "channel,min_mse,max_mse,min_mae,max_mae\n";
  for (const auto& c : report.channels) {
    out << c.channel << ',' << fmt(c.min_mse) << ',' << fmt(c.max_mse) << ',' << fmt(c.min_mae) << ','
        << fmt(c.max_mae) << '\n';
  }
  return out.str();
}

void write_report(const EvalReport& report, const fs::path& csv_path) {
  write_text(csv_path, report_csv(report));
  fs::path meta = csv_path;
  meta.replace_extension(".json");
  Json j = report.meta;
  Json per = Json::array();
  for (const auto& t : report.trajectories) {
    per.push_back(Json{{"session_id", t.session_id}, {"mse", t.mse}, {"mae", t.mae}});
  }
  j["per_trajectory"] = per;
  write_text(meta, j.dump(2) + "\n");
}

void write_overlays(const EvalReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < report.overlays.size(); ++i) {
    const Overlay& o = report.overlays[i];
    std::ostringstream out;
    out << 't';
    for (const auto& name : target_channel_names()) out << ",pred_" << name << ",true_" << name;
    out << '\n';
    for (std::size_t r = 0; r < o.t.size(); ++r) {
      out << fmt(o.t[r]);
      for (int k = 0; k < kTargetDim; ++k) {
        out << ',' << fmt(o.predicted[r * kTargetDim + k]) << ',' << fmt(o.truth[r * kTargetDim + k]);
      }
      out << '\n';
    }
    std::string name = o.session_id.empty() ? "trajectory" : o.session_id;
    for (char& ch : name) {
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_' && ch != '.') ch = '_';
    }
    std::ostringstream file;
    file << std::setw(3) << std::setfill('0') << i << '_' << name << ".csv";
    write_text(dir / file.str(), out.str());
  }
}

}  // namespace wheelarm::learning
