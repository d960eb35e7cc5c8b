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

#include <filesystem>
#include <fstream>

#include "common/error.hpp"
#include "dataset/align.hpp"
#include "learning/evaluate.hpp"
#include "learning_oracles.hpp"
#include "teleop/script.hpp"

using namespace wheelarm;
using namespace wheelarm::learning;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

// Small dims keep the training tests fast; the full-size model is covered by the acceptance run.
ModelDims small_dims() {
  ModelDims d;
  d.rgb_embed = 8;
  d.depth_embed = 4;
  d.state_embed = 8;
  d.time_embed = 4;
  d.token_embed = 4;
  d.fusion_hidden = 16;
  d.fusion_out = 16;
  d.lstm_hidden = 12;
  return d;
}

std::vector<TrajectoryFeatures> synthetic_set(int count, std::size_t n) {
  std::vector<TrajectoryFeatures> out;
  for (int i = 0; i < count; ++i) out.push_back(oracle::synthetic_trajectory(n, 100 + i));
  return out;
}

NormStats identity_stats() {
  NormStats s;
  s.state_mean.assign(kStateDim, 0.0);
  s.state_std.assign(kStateDim, 1.0);
  s.target_mean.assign(kTargetDim, 0.0);
  s.target_std.assign(kTargetDim, 1.0);
  return s;
}

const dataset::Recording& aligned_replay() {
  static const dataset::Recording rec = [] {
    const auto cfg = robot::default_robot_config();
    const std::string text = R"({"format": "wheelarm-script/1", "manifest": {"instruction": "Pick up the mustard"}, "duration": 2.0}
{"t": 0.0, "kind": "base_velocity", "linear": 0.2, "angular": 0.0}
{"t": 0.5, "kind": "ee_increment", "axis": "z", "direction": -1, "repeat": 5, "interval": 0.1})";
    return dataset::align_recording(
        teleop::replay_script(teleop::parse_script(text, cfg), cfg, scene::default_scene(), 2).recording);
  }();
  return rec;
}

}  // namespace

TEST_CASE("fnv1a and tokenization") {
  // Published FNV-1a 32-bit test vectors.
  CHECK(fnv1a("") == 0x811c9dc5u);
  CHECK(fnv1a("a") == 0xe40c292cu);
  CHECK(fnv1a("foobar") == 0xbf9cf968u);
  const auto toks = tokenize("Pick up the mustard");
  REQUIRE(toks.size() == 4);
  CHECK(toks[0] == static_cast<int>(fnv1a("pick") % 1024));
  CHECK(toks[3] == static_cast<int>(fnv1a("mustard") % 1024));
  CHECK(tokenize("  PICK\tup the\nMustard ") == toks);
  CHECK(tokenize("").empty());
}

TEST_CASE("featurize shifts targets by one row") {
  const dataset::Recording& al = aligned_replay();
  const std::size_t rows = al.require_topic("joint_states").rows();
  const TrajectoryFeatures f = featurize(al);
  REQUIRE(f.samples() == rows - 1);
  CHECK(f.rgb.size() == f.samples() * kRgbDim);
  CHECK(f.depth.size() == f.samples() * kDepthDim);
  CHECK(f.tokens == tokenize("pick up the mustard"));
  const auto& ee = al.require_topic("ee_pose");
  const auto& grip = al.require_topic("gripper");
  for (std::size_t k = 0; k < f.samples(); ++k) {
    for (int c = 0; c < 7; ++c) CHECK(f.target[k * kTargetDim + c] == ee.at(k + 1, 1 + c));
    CHECK(f.target[k * kTargetDim + 15] == grip.at(k + 1, 2));
    CHECK(f.state[k * kStateDim + 14] == ee.at(k, 1));
    CHECK(f.timestamp[k] == al.require_topic("joint_states").time(k) - al.require_topic("joint_states").time(0));
  }
  for (float v : f.rgb) CHECK((v >= 0.0f && v <= 1.0f));
  for (float v : f.depth) CHECK((v > 0.0f && v <= 6.0f));

  dataset::Recording missing = al;
  missing.frames.erase("wrist");
  CHECK(code_of([&] { featurize(missing); }) == ErrorCode::kSchemaMismatch);
}

TEST_CASE("constant channels normalize to finite values") {
  TrajectoryFeatures f = oracle::synthetic_trajectory(30, 1);
  for (std::size_t k = 0; k < f.samples(); ++k) {
    for (int c = 0; c < kTargetDim; ++c) f.target[k * kTargetDim + c] = 0.25;
  }
  const NormStats s = compute_stats({&f});
  for (double v : s.target_std) CHECK(v == kStdFloor);
  const Batch<double> b = make_batch<double>({&f}, {Window{0, 0, 20}}, s);
  CHECK(b.target.allFinite());
  CHECK(b.target.isZero(0.0));
  CHECK(b.state.allFinite());
}

TEST_CASE("zero parameters predict zero") {
  const TrajectoryFeatures f = oracle::synthetic_trajectory(25, 2);
  const Params<double> p = Params<double>::zeros(ModelDims{});
  const Mat<double> y = forward<double>(p, make_batch<double>({&f}, {Window{0, 0, 20}}, identity_stats()));
  CHECK(y.rows() == kTargetDim);
  CHECK(y.cols() == 20);
  CHECK(y.isZero(0.0));
  CHECK(p.count() == init_params(ModelDims{}, 1).count());
}

TEST_CASE("prediction at a step depends only on earlier steps") {
  const TrajectoryFeatures f = oracle::synthetic_trajectory(25, 3);
  const Params<double> p = init_params(ModelDims{}, 9).cast<double>();
  const NormStats s = compute_stats({&f});
  const Mat<double> full = forward<double>(p, make_batch<double>({&f}, {Window{0, 0, 20}}, s));
  const Mat<double> first = forward<double>(p, make_batch<double>({&f}, {Window{0, 0, 1}}, s));
  const Mat<double> prefix = forward<double>(p, make_batch<double>({&f}, {Window{0, 0, 7}}, s));
  CHECK((full.col(0) - first.col(0)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((full.leftCols(7) - prefix).cwiseAbs().maxCoeff() <= 1e-12);

  // Changing a later input leaves earlier outputs alone.
  TrajectoryFeatures g = f;
  for (int c = 0; c < kStateDim; ++c) g.state[10 * kStateDim + c] += 1.0;
  const Mat<double> changed = forward<double>(p, make_batch<double>({&g}, {Window{0, 0, 20}}, s));
  CHECK((changed.leftCols(10) - full.leftCols(10)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((changed.col(10) - full.col(10)).cwiseAbs().maxCoeff() > 1e-6);

  Batch<double> bad = make_batch<double>({&f}, {Window{0, 0, 3}}, s);
  bad.rgb.conservativeResize(10, Eigen::NoChange);
  CHECK(code_of([&] { forward<double>(p, bad); }) == ErrorCode::kShapeMismatch);
}

TEST_CASE("analytic gradients match finite differences") {
  const auto trajs = synthetic_set(2, 12);
  std::vector<const TrajectoryFeatures*> ptrs = {&trajs[0], &trajs[1]};
  const NormStats s = compute_stats(ptrs);
  const Batch<double> b = make_batch<double>(ptrs, {Window{0, 2, 4}, Window{1, 5, 4}}, s);
  SUBCASE("small model, every entry of every tensor class") {
    const auto r = oracle::finite_difference_check(init_params(small_dims(), 4).cast<double>(), b, 400, 8);
    CHECK(r.max_rel_error < 1e-4);
  }
  SUBCASE("full-size model") {
    const auto r = oracle::finite_difference_check(init_params(ModelDims{}, 5).cast<double>(), b, 200, 6);
    CHECK(r.checked == 200);
    for (int n : r.per_tensor) CHECK(n == 10);
    CHECK(r.max_rel_error < 1e-4);
  }
}

TEST_CASE("gradient clipping and learning-rate schedule") {
  Params<float> g = Params<float>::zeros(small_dims());
  for (auto& m : g.t) m.setConstant(0.5f);
  const double before = clip_grad_norm(g, 1.0);
  CHECK(before > 1.0);
  double after = 0.0;
  for (const auto& m : g.t) after += m.cast<double>().squaredNorm();
  CHECK(std::sqrt(after) <= 1.0 + 1e-9);

  Params<float> small = Params<float>::zeros(small_dims());
  small[kHeadB].setConstant(0.01f);
  const Mat<float> keep = small[kHeadB];
  CHECK(clip_grad_norm(small, 1.0) < 1.0);
  CHECK(small[kHeadB] == keep);

  TrainConfig cfg;
  for (int e = 0; e < 30; ++e) {
    double expected = 1e-4;
    for (int k = 0; k < e / 5; ++k) expected *= 0.1;
    CHECK(learning_rate(cfg, e) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(learning_rate(cfg, 4) == 1e-4);
  CHECK(learning_rate(cfg, 5) == doctest::Approx(1e-5).epsilon(1e-15));
}

TEST_CASE("adam step matches the update rule") {
  TrainConfig cfg;
  Params<float> p = Params<float>::zeros(small_dims());
  p[kHeadB].setConstant(2.0f);
  Params<float> g = Params<float>::zeros(small_dims());
  g[kHeadB].setConstant(0.3f);
  AdamState st;
  adam_step(p, g, st, cfg, 1e-3);
  // First step: m_hat = g', v_hat = g'^2, so the move is lr * g' / (|g'| + eps).
  const double gp = 0.3 + 1e-4 * 2.0;
  CHECK(p[kHeadB](0, 0) == doctest::Approx(2.0 - 1e-3 * gp / (gp + 1e-8)).epsilon(1e-6));
  CHECK(p[kHeadW].isZero(0.0f));
}

TEST_CASE("train config validation") {
  const TrainConfig def = TrainConfig::from_json(Json::object());
  CHECK(def.lr == 1e-4);
  CHECK(def.batch == 16);
  CHECK(def.sequence_length == 20);
  CHECK(def.patience == 3);
  CHECK(TrainConfig::from_json(def.to_json()).to_json() == def.to_json());
  CHECK(TrainConfig::from_json(Json{{"sequence_length", 15}}).sequence_length == 15);
  CHECK(code_of([] { TrainConfig::from_json(Json{{"learning_rate", 0.1}}); }) == ErrorCode::kSchemaError);
  CHECK(code_of([] { TrainConfig::from_json(Json{{"lr", -1.0}}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { TrainConfig::from_json(Json{{"train_split", 0.7}}); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { TrainConfig::from_json(Json{{"batch", "many"}}); }) == ErrorCode::kSchemaError);
}

TEST_CASE("training runs, stops and is deterministic") {
  const auto trajs = synthetic_set(5, 30);
  TrainConfig cfg;
  cfg.dims = small_dims();
  cfg.max_epochs = 1;
  cfg.seed = 17;
  const TrainResult one = train(trajs, cfg);
  CHECK(one.history.size() == 1);
  CHECK(one.val_sessions.size() == 1);
  CHECK(one.train_sessions.size() == 4);

  cfg.max_epochs = 6;
  cfg.lr = 1e-3;
  const TrainResult a = train(trajs, cfg);
  const TrainResult b = train(trajs, cfg);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].train_loss == b.history[i].train_loss);
    CHECK(a.history[i].val_loss == b.history[i].val_loss);
  }
  for (int i = 0; i < kTensorCount; ++i) CHECK(a.params[i] == b.params[i]);
  CHECK(a.history.back().val_loss < a.history.front().val_loss);

  cfg.seed = 18;
  const TrainResult c = train(trajs, cfg);
  CHECK(c.history.front().train_loss != a.history.front().train_loss);

  CHECK(code_of([&] { train({trajs[0]}, cfg); }) == ErrorCode::kInsufficientData);
}

TEST_CASE("early stopping honours patience") {
  const auto trajs = synthetic_set(4, 25);
  TrainConfig cfg;
  cfg.dims = small_dims();
  cfg.max_epochs = 100;
  cfg.lr = 1e-12;  // no meaningful progress: validation loss stalls
  cfg.patience = 2;
  const TrainResult r = train(trajs, cfg);
  CHECK(r.stopped_early);
  CHECK(r.history.size() < 100);
  CHECK(static_cast<int>(r.history.size()) - 1 - r.best_epoch == 2);
}

TEST_CASE("metrics and report") {
  const TrajectoryFeatures f = oracle::synthetic_trajectory(15, 4);
  const TrajectoryMetrics perfect = trajectory_metrics("p", f.target, f.target);
  for (int k = 0; k < kTargetDim; ++k) {
    CHECK(perfect.mse[k] == 0.0);
    CHECK(perfect.mae[k] == 0.0);
  }
  std::vector<double> off = f.target;
  for (std::size_t r = 0; r < f.samples(); ++r) off[r * kTargetDim + 3] += (r % 2 ? 0.1 : -0.3);
  const TrajectoryMetrics m = trajectory_metrics("q", off, f.target);
  const double n = static_cast<double>(f.samples());
  const double odd = std::floor(n / 2.0);
  CHECK(m.mse[3] == doctest::Approx((odd * 0.01 + (n - odd) * 0.09) / n));
  CHECK(m.mae[3] == doctest::Approx((odd * 0.1 + (n - odd) * 0.3) / n));
  const auto table = channel_table({perfect, m});
  REQUIRE(table.size() == 16);
  CHECK(table[3].channel == "ee_qx");
  CHECK(table[3].min_mse == 0.0);
  CHECK(table[3].max_mse == m.mse[3]);
  CHECK(code_of([&] { trajectory_metrics("x", {1.0}, {1.0, 2.0}); }) == ErrorCode::kShapeMismatch);

  EvalReport rep;
  rep.channels = table;
  const std::string csv = report_csv(rep);
  CHECK(csv.rfind("channel,min_mse,max_mse,min_mae,max_mae\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
}

TEST_CASE("model file round trip") {
  const auto trajs = synthetic_set(3, 22);
  TrainConfig cfg;
  cfg.dims = small_dims();
  cfg.max_epochs = 2;
  const Model m = model_from_result(train(trajs, cfg), cfg);
  const auto dir = std::filesystem::temp_directory_path() / "wheelarm_test_model";
  std::filesystem::remove_all(dir);
  save_model(m, dir / "model.json");
  const Model back = load_model(dir / "model.json");
  for (int i = 0; i < kTensorCount; ++i) CHECK(back.params[i] == m.params[i]);
  CHECK(back.config.to_json() == m.config.to_json());
  CHECK(back.history == m.history);
  CHECK(predict(back, trajs[0]) == predict(m, trajs[0]));

  const EvalReport rep = evaluate(back, trajs);
  CHECK(rep.channels.size() == 16);
  write_report(rep, dir / "report.csv");
  write_overlays(rep, dir / "overlays");
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::distance(std::filesystem::directory_iterator(dir / "overlays"), {}) == 3);

  std::ofstream(dir / "bad.json") << R"({"format": "something-else"})";
  CHECK(code_of([&] { load_model(dir / "bad.json"); }) == ErrorCode::kSchemaMismatch);
}
