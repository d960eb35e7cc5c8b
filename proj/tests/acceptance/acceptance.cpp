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

// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 only when
// every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/SVD>

#include "common/error.hpp"
#include "dataset/align.hpp"
#include "dataset/container.hpp"
#include "dataset/inspect.hpp"
#include "kinematics/chain.hpp"
#include "kinematics/ik.hpp"
#include "kinematics/se3.hpp"
#include "learning/evaluate.hpp"
#include "learning/features.hpp"
#include "learning/train.hpp"
#include "learning/model.hpp"
#include "learning_oracles.hpp"
#include "oracles.hpp"
#include "robot/robot.hpp"
#include "scene/scene.hpp"
#include "teleop/planner.hpp"
#include "teleop/script.hpp"

using namespace wheelarm;
namespace fs = std::filesystem;

namespace {

namespace limits {
// IK
constexpr int kIkTargets = 500;
constexpr double kIkSeedPerturbation = 0.1;
constexpr double kIkMinConvergedFraction = 0.99;
constexpr double kIkResidual = 1e-6;
constexpr int kIkMaxIterations = 50;
constexpr double kIkFkError = 1e-5;
constexpr double kIkSeconds = 10.0;
// Algebra
constexpr double kRoundTrip = 1e-9;
constexpr double kJacobianRelError = 1e-4;
constexpr double kPenrose = 1e-8;
constexpr double kPenroseConditioning = 1e4;
constexpr double kAlgebraSeconds = 5.0;
// Diff drive
constexpr int kDriveCases = 1000;
constexpr int kEulerSubsteps = 10000;
constexpr double kDriveError = 1e-6;
// Alignment
constexpr double kLinearExact = 1e-12;
constexpr double kSineBound = 2e-4;
constexpr double kUnitNorm = 1e-9;
constexpr double kMidpoint = 1e-3;
// Pipeline
constexpr double kCountSlack = 1.0;
// Gradient check
constexpr double kGradRelError = 1e-4;
constexpr int kGradSamplesPerTensor = 40;
constexpr double kGradSeconds = 60.0;
// Learnability
constexpr int kMustardVariants = 24;
constexpr int kTrainValTrajectories = 20;
constexpr double kBestToFirstRatio = 0.5;
constexpr int kMaxEpochs = 100;
constexpr double kConstantChannelOrders = 6.0;
constexpr double kLearnSeconds = 15.0 * 60.0;
// Container
constexpr int kContainerTrials = 100;
constexpr int kCorruptionsPerContainer = 10;
}  // namespace limits

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

kin::JointVector random_in_limits(const kin::ChainDescription& c, std::mt19937_64& rng) {
  kin::JointVector q(c.dof());
  for (std::size_t i = 0; i < c.dof(); ++i) {
    q(i) = std::uniform_real_distribution<double>(c.joint_limits[i].min, c.joint_limits[i].max)(rng);
  }
  return q;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

Outcome ik_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  const kin::ChainDescription chain = kin::default_chain();
  const kin::Mat4 home = chain.home_pose.matrix();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> d(-limits::kIkSeedPerturbation, limits::kIkSeedPerturbation);
  int ok = 0;
  int worst_iterations = 0;
  double worst_fk = 0.0;
  for (int k = 0; k < limits::kIkTargets; ++k) {
    const kin::JointVector q_star = random_in_limits(chain, rng);
    kin::JointVector q0 = q_star;
    for (Eigen::Index i = 0; i < q0.size(); ++i) q0(i) += d(rng);
    const kin::Mat4 target = oracle::product_fk(home, chain.screw_axes, q_star);
    try {
      const kin::IkSolution s = kin::ik_newton_raphson(chain, kin::RigidTransform::from_matrix(target), q0);
      const double fk_err = max_abs(oracle::product_fk(home, chain.screw_axes, s.q) - target);
      if (s.residual < limits::kIkResidual && s.iterations <= limits::kIkMaxIterations && fk_err < limits::kIkFkError) {
        ++ok;
        worst_iterations = std::max(worst_iterations, s.iterations);
        worst_fk = std::max(worst_fk, fk_err);
      }
    } catch (const IkError&) {
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = ok >= limits::kIkMinConvergedFraction * limits::kIkTargets && secs < limits::kIkSeconds;
  return {pass, fmt("%d/%d converged, max iterations %d, max FK error %.2e, %.2f s", ok, limits::kIkTargets,
                    worst_iterations, worst_fk, secs)};
}

Outcome algebra_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(202);
  std::normal_distribution<double> n(0.0, 1.0);
  double round_trip = 0.0;
  for (int k = 0; k < 2000; ++k) {
    kin::Vec3 axis(n(rng), n(rng), n(rng));
    axis.normalize();
    // Mix ordinary angles with tiny ones near the series branch.
    const double angle = k % 4 == 0 ? std::pow(10.0, std::uniform_real_distribution<double>(-12, -3)(rng))
                                    : std::uniform_real_distribution<double>(0.0, 3.0)(rng);
    kin::Vec6 xi;
    xi.head<3>() = axis * angle;
    xi.tail<3>() = kin::Vec3(n(rng), n(rng), n(rng));
    const kin::RigidTransform t = kin::se3_exp(kin::Twist::from_vector(xi));
    round_trip = std::max(round_trip, max_abs(t.matrix() - oracle::series_exp(oracle::twist_matrix(xi))));
    round_trip = std::max(round_trip, max_abs(kin::se3_log(t).vector() - xi));
    round_trip = std::max(round_trip, max_abs(kin::se3_exp(kin::se3_log(t)).matrix() - t.matrix()));
  }

  const kin::ChainDescription chain = kin::default_chain();
  auto fk = [&](const Eigen::VectorXd& q) { return oracle::product_fk(chain.home_pose.matrix(), chain.screw_axes, q); };
  double jac = 0.0;
  double penrose = 0.0;
  auto penrose_err = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& p) {
    return std::max({max_abs(a * p * a - a), max_abs(p * a * p - p), max_abs((a * p).transpose() - a * p),
                     max_abs((p * a).transpose() - p * a)});
  };
  // Penrose residuals grow with the condition number of the nonzero spectrum,
  // so near-singular configurations are counted but not scored.
  auto conditioning = [](const Eigen::MatrixXd& a, int rank) {
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
    return sv(0) / sv(rank - 1);
  };
  int scored = 0;
  for (int k = 0; k < 200; ++k) {
    const kin::JointVector q = random_in_limits(chain, rng);
    const kin::Jacobian analytic = kin::body_jacobian(chain, q);
    const auto numeric = oracle::fd_body_jacobian(fk, q);
    for (Eigen::Index i = 0; i < analytic.cols(); ++i) {
      jac = std::max(jac, (analytic.col(i) - numeric.col(i)).norm() / analytic.col(i).norm());
    }
    if (conditioning(analytic, 6) <= limits::kPenroseConditioning) {
      penrose = std::max(penrose, penrose_err(analytic, kin::pseudoinverse(analytic)));
      ++scored;
    }
    // Two duplicated columns leave five independent ones: rank 5.
    Eigen::MatrixXd deficient = analytic;
    deficient.col(k % 7) = deficient.col((k + 3) % 7);
    deficient.col((k + 1) % 7) = deficient.col((k + 5) % 7);
    if (conditioning(deficient, 5) <= limits::kPenroseConditioning) {
      penrose = std::max(penrose, penrose_err(deficient, kin::pseudoinverse(deficient)));
      ++scored;
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = round_trip < limits::kRoundTrip && jac < limits::kJacobianRelError && penrose < limits::kPenrose &&
                    scored >= 300 && secs < limits::kAlgebraSeconds;
  return {pass, fmt("exp/log %.2e, Jacobian rel %.2e, Penrose %.2e over %d/400 matrices with condition <= %.0e, %.2f s",
                    round_trip, jac, penrose, scored, limits::kPenroseConditioning, secs)};
}

Outcome diff_drive_suite() {
  const robot::RobotConfig cfg = robot::default_robot_config();
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> uv(-cfg.max_linear, cfg.max_linear), uw(-cfg.max_angular, cfg.max_angular),
      udt(1e-3, 0.1), uyaw(-std::numbers::pi, std::numbers::pi);
  double worst = 0.0;
  for (int k = 0; k < limits::kDriveCases; ++k) {
    robot::WheelchairState s;
    s.yaw = uyaw(rng);
    const double v = uv(rng), w = uw(rng), dt = udt(rng);
    const robot::WheelchairState e = robot::step_diff_drive(s, {v, w}, dt, cfg);
    const oracle::Pose2 ref = oracle::euler_unicycle({0.0, 0.0, s.yaw}, v, w, dt, limits::kEulerSubsteps);
    worst = std::max({worst, std::hypot(e.x - ref.x, e.y - ref.y), std::abs(e.yaw - ref.theta)});
  }
  bool straight = true;
  for (int k = 0; k < limits::kDriveCases; ++k) {
    robot::WheelchairState s;
    s.yaw = uyaw(rng);
    const robot::WheelchairState e = robot::step_diff_drive(s, {uv(rng), 0.0}, udt(rng), cfg);
    const double lateral = -(e.x - s.x) * std::sin(s.yaw) + (e.y - s.y) * std::cos(s.yaw);
    straight = straight && e.yaw == s.yaw && e.wheel_velocities[0] == e.wheel_velocities[1] && std::abs(lateral) < 1e-15;
  }
  return {worst < limits::kDriveError && straight,
          fmt("max deviation from %d-substep Euler %.2e, straight line %s", limits::kEulerSubsteps, worst,
              straight ? "exact" : "broken")};
}

Outcome alignment_suite() {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> jitter(-0.002, 0.002), u(-5.0, 5.0);
  // Jittered 60 Hz source over 10 s.
  std::vector<double> t;
  for (int i = 0; i <= 600; ++i) t.push_back(i / 60.0 + (i == 0 || i == 600 ? 0.0 : jitter(rng)));
  dataset::RowMatrix v(static_cast<Eigen::Index>(t.size()), 3);
  for (Eigen::Index i = 0; i < v.rows(); ++i) v.row(i) << u(rng), u(rng), u(rng);

  const bool knots = dataset::interp_linear(t, v, t) == v;

  std::vector<double> ref;
  for (int i = 0; i < 100; ++i) ref.push_back(0.0437 + i * 0.1 + jitter(rng));
  dataset::RowMatrix lin(v.rows(), 2);
  for (Eigen::Index i = 0; i < v.rows(); ++i) lin.row(i) << 3.0 * t[i] - 1.0, -0.5 * t[i] + 2.0;
  const dataset::RowMatrix lin_out = dataset::interp_linear(t, lin, ref);
  double lin_err = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    lin_err = std::max({lin_err, std::abs(lin_out(k, 0) - (3.0 * ref[k] - 1.0)), std::abs(lin_out(k, 1) - (-0.5 * ref[k] + 2.0))});
  }

  std::vector<double> t60;
  dataset::RowMatrix sine(601, 1);
  for (int i = 0; i <= 600; ++i) {
    t60.push_back(i / 60.0);
    sine(i, 0) = std::sin(2.0 * t60.back());
  }
  const dataset::RowMatrix sine_out = dataset::interp_linear(t60, sine, ref);
  double sine_err = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) sine_err = std::max(sine_err, std::abs(sine_out(k, 0) - std::sin(2.0 * ref[k])));

  // Orientation random walk with arbitrary sign flips between samples.
  dataset::RowMatrix quats(static_cast<Eigen::Index>(t.size()), 4);
  kin::Mat3 r = kin::Mat3::Identity();
  std::normal_distribution<double> n(0.0, 0.05);
  for (Eigen::Index i = 0; i < quats.rows(); ++i) {
    r = r * kin::so3_exp(kin::Vec3(n(rng), n(rng), n(rng)));
    kin::Vec4 q = kin::rotation_to_quat_xyzw(r);
    if (rng() % 2) q = -q;
    quats.row(i) = q.transpose();
  }
  const dataset::RowMatrix q_out = dataset::interp_quaternion(t, quats, ref);
  double norm_err = 0.0;
  for (Eigen::Index k = 0; k < q_out.rows(); ++k) norm_err = std::max(norm_err, std::abs(q_out.row(k).norm() - 1.0));

  double mid_err = 0.0;
  for (int k = 0; k < 1000; ++k) {
    kin::Vec3 axis(n(rng), n(rng), n(rng));
    const kin::Vec4 a = kin::rotation_to_quat_xyzw(kin::so3_exp(kin::Vec3(u(rng), u(rng), u(rng)).normalized() * 2.0));
    const kin::Vec4 b = kin::rotation_to_quat_xyzw(kin::quat_xyzw_to_rotation(a) *
                                                   kin::so3_exp(axis.normalized() * std::abs(u(rng)) * 0.3));
    dataset::RowMatrix pair(2, 4);
    pair.row(0) = a.transpose();
    pair.row(1) = b.transpose();
    const kin::Vec4 got = dataset::interp_quaternion({0.0, 1.0}, pair, {0.5}).row(0).transpose();
    const kin::Vec4 want = oracle::slerp(a, b, 0.5);
    mid_err = std::max(mid_err, std::min((got - want).norm(), (got + want).norm()));
  }

  const bool pass = knots && lin_err < limits::kLinearExact && sine_err < limits::kSineBound &&
                    norm_err < limits::kUnitNorm && mid_err < limits::kMidpoint;
  return {pass, fmt("knots %s, linear %.2e, sine %.2e, unit norm %.2e, midpoint vs slerp %.2e", knots ? "exact" : "off",
                    lin_err, sine_err, norm_err, mid_err)};
}

std::vector<std::uint8_t> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::string> container_files(const fs::path& dir) {
  std::vector<std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), dir).generic_string());
  }
  std::sort(files.begin(), files.end());
  return files;
}

double nominal_rate(const std::string& topic, const robot::RobotConfig& cfg) {
  if (topic == dataset::kJointStates) return cfg.rates.joint_states;
  if (topic == dataset::kImu) return cfg.rates.imu;
  if (topic.rfind("camera_", 0) == 0) return cfg.rates.camera;
  return cfg.rates.base;
}

Outcome pipeline_determinism(const fs::path& work) {
  const robot::RobotConfig cfg = robot::default_robot_config();
  const scene::Scene scene = scene::default_scene();
  std::vector<fs::path> scripts;
  for (const auto& e : fs::directory_iterator(fs::path(WHEELARM_DATA_DIR) / "scripts")) scripts.push_back(e.path());
  std::sort(scripts.begin(), scripts.end());
  int identical = 0;
  int counts_ok = 0;
  double worst_slack = 0.0;
  for (const fs::path& script : scripts) {
    const teleop::Script s = teleop::load_script(script, cfg);
    const fs::path a = work / "run_a" / script.stem() / "raw.watr";
    const fs::path b = work / "run_b" / script.stem() / "raw.watr";
    dataset::write_container(teleop::replay_script(s, cfg, scene).recording, a);
    dataset::write_container(teleop::replay_script(s, cfg, scene).recording, b);
    const auto files = container_files(a);
    bool same = files == container_files(b);
    for (std::size_t i = 0; same && i < files.size(); ++i) same = slurp(a / files[i]) == slurp(b / files[i]);
    identical += same;

    const dataset::Recording rec = dataset::read_container(a);
    const double duration = rec.manifest.end_time - rec.manifest.start_time;
    bool ok = true;
    for (const dataset::TopicSummary& t : dataset::summarize(rec)) {
      const double slack = std::abs(static_cast<double>(t.rows) - duration * nominal_rate(t.name, cfg));
      worst_slack = std::max(worst_slack, slack);
      ok = ok && slack <= limits::kCountSlack + 1e-9;
    }
    counts_ok += ok;
  }
  const int total = static_cast<int>(scripts.size());
  return {total == 13 && identical == total && counts_ok == total,
          fmt("%d/%d scripts byte-identical, %d/%d within +-1 of nominal counts (worst %.2f)", identical, total,
              counts_ok, total, worst_slack)};
}

learning::TrajectoryFeatures replay_features(const teleop::Script& s, const robot::RobotConfig& cfg,
                                             const scene::Scene& scene) {
  const dataset::Recording raw = teleop::replay_script(s, cfg, scene).recording;
  return learning::featurize(dataset::align_recording(raw));
}

Outcome gradient_check() {
  const auto t0 = std::chrono::steady_clock::now();
  const robot::RobotConfig cfg = robot::default_robot_config();
  const scene::Scene scene = scene::default_scene();
  const learning::TrajectoryFeatures f =
      replay_features(teleop::load_script(fs::path(WHEELARM_DATA_DIR) / "scripts" / "pick_mustard.jsonl", cfg), cfg, scene);
  const learning::TrajectoryFeatures g =
      replay_features(teleop::load_script(fs::path(WHEELARM_DATA_DIR) / "scripts" / "open_drawer.jsonl", cfg), cfg, scene);
  const std::vector<const learning::TrajectoryFeatures*> ptrs = {&f, &g};
  const learning::NormStats stats = learning::compute_stats(ptrs);
  const learning::Batch<double> batch =
      learning::make_batch<double>(ptrs, {learning::Window{0, 10, 6}, learning::Window{1, 30, 6}}, stats);
  const int samples = limits::kGradSamplesPerTensor * learning::kTensorCount;
  const auto r = oracle::finite_difference_check(learning::init_params(learning::ModelDims{}, 17).cast<double>(), batch,
                                                 samples, 23);
  const double secs = seconds_since(t0);
  const bool pass = r.checked == samples && r.max_rel_error < limits::kGradRelError && secs < limits::kGradSeconds;
  return {pass, fmt("%d entries over %d tensors, max rel error %.2e, %.1f s", r.checked, learning::kTensorCount,
                    r.max_rel_error, secs)};
}

Outcome learnability(const fs::path& work) {
  const auto t0 = std::chrono::steady_clock::now();
  const robot::RobotConfig cfg = robot::default_robot_config();
  const scene::Scene scene = scene::default_scene();
  std::vector<learning::TrajectoryFeatures> train_val, test;
  for (int i = 0; i < limits::kMustardVariants; ++i) {
    auto f = replay_features(teleop::plan_mustard_variant(i, cfg, scene), cfg, scene);
    (i < limits::kTrainValTrajectories ? train_val : test).push_back(std::move(f));
  }
  learning::TrainConfig tc;
  tc.max_epochs = limits::kMaxEpochs;
  const learning::TrainResult result = learning::train(train_val, tc);
  const learning::Model model = learning::model_from_result(result, tc);
  const learning::EvalReport report = learning::evaluate(model, test);
  learning::write_report(report, work / "learnability" / "report.csv");

  const double first = result.history.front().val_loss;
  double best = first;
  for (const auto& e : result.history) best = std::min(best, e.val_loss);
  const auto& names = learning::target_channel_names();
  bool channels = report.channels.size() == names.size();
  for (std::size_t i = 0; channels && i < names.size(); ++i) channels = report.channels[i].channel == names[i];
  double wz = NAN, wx = NAN;
  for (const auto& c : report.channels) {
    if (c.channel == "w_z") wz = c.max_mse;
    if (c.channel == "w_x") wx = c.min_mse;
  }
  const double orders = wz > 0.0 ? std::log10(wx / wz) : INFINITY;
  const double secs = seconds_since(t0);
  const bool pass = result.train_sessions.size() == 16 && result.val_sessions.size() == 4 && test.size() == 4 &&
                    best <= limits::kBestToFirstRatio * first && channels && orders >= limits::kConstantChannelOrders &&
                    secs < limits::kLearnSeconds;
  return {pass, fmt("%zu train / %zu val / %zu test, val MSE %.4f -> best %.4f (ratio %.3f) in %zu epochs, "
                    "%zu channels, w_z %.1f orders below w_x, %.0f s",
                    result.train_sessions.size(), result.val_sessions.size(), test.size(), first, best, best / first,
                    result.history.size(), report.channels.size(), orders, secs)};
}

std::string random_script(std::mt19937_64& rng, int trial) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double duration = 0.5 + 1.5 * u(rng);
  nlohmann::json header = {{"format", "wheelarm-script/1"},
                           {"manifest",
                            {{"file_name", "trial_" + std::to_string(trial)},
                             {"instruction", "move \"it\" \xC3\xA0 " + std::to_string(rng() % 1000)},
                             {"task_label", trial % 2 ? "grocery" : ""}}},
                           {"duration", duration},
                           {"seed", rng() % 100000},
                           {"start_pose", {u(rng) - 0.5, u(rng) - 0.5, 6.0 * u(rng) - 3.0}}};
  std::string text = header.dump() + "\n";
  const char* axes[] = {"x", "y", "z"};
  for (double t = 0.0; t < duration; t += 0.05 + 0.3 * u(rng)) {
    nlohmann::json c = {{"t", t}};
    switch (rng() % 4) {
      case 0: c.update({{"kind", "base_velocity"}, {"linear", 2.0 * u(rng) - 1.0}, {"angular", 3.0 * u(rng) - 1.5}}); break;
      case 1: c.update({{"kind", "ee_increment"}, {"axis", axes[rng() % 3]}, {"direction", rng() % 2 ? 1 : -1}}); break;
      case 2: c.update({{"kind", "gripper"}, {"action", rng() % 2 ? "close_step" : "open_step"}}); break;
      default: c["kind"] = "stop";
    }
    text += c.dump() + "\n";
  }
  return text;
}

Outcome container_suite(const fs::path& work) {
  const robot::RobotConfig cfg = robot::default_robot_config();
  const scene::Scene scene = scene::default_scene();
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> exponent(-300.0, 300.0);
  int identical = 0;
  int detected = 0;
  int corruptions = 0;
  for (int trial = 0; trial < limits::kContainerTrials; ++trial) {
    dataset::Recording rec =
        teleop::replay_script(teleop::parse_script(random_script(rng, trial), cfg), cfg, scene).recording;
    // Arbitrary finite payloads beyond what the simulator produces.
    for (dataset::TopicData& t : rec.topics) {
      for (std::size_t i = 0; i < t.values.size(); ++i) {
        if (i % t.cols() != 0 && rng() % 8 == 0) {
          t.values[i] = (rng() % 2 ? -1.0 : 1.0) * std::pow(10.0, exponent(rng));
        }
      }
    }
    const fs::path dir = work / "containers" / ("trial_" + std::to_string(trial) + ".watr");
    dataset::write_container(rec, dir);
    identical += dataset::read_container(dir) == rec;

    const auto files = container_files(dir);
    for (int c = 0; c < limits::kCorruptionsPerContainer; ++c) {
      const fs::path file = dir / files[rng() % files.size()];
      auto bytes = slurp(file);
      const std::size_t at = rng() % bytes.size();
      const std::uint8_t keep = bytes[at];
      bytes[at] = static_cast<std::uint8_t>(keep ^ (1 + rng() % 255));
      spit(file, bytes);
      ++corruptions;
      try {
        dataset::read_container(dir);
      } catch (const CorruptContainerError&) {
        ++detected;
      } catch (const Error&) {
      }
      bytes[at] = keep;
      spit(file, bytes);
    }
    fs::remove_all(dir);
  }
  return {identical == limits::kContainerTrials && detected == corruptions,
          fmt("%d/%d round trips identical, %d/%d single-byte corruptions detected", identical,
              limits::kContainerTrials, detected, corruptions)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("Runs the acceptance criteria and prints one line per criterion");
  std::string work_arg;
  std::vector<std::string> only;
  app.add_option("--work", work_arg, "Scratch directory (default: a fresh temporary directory)");
  app.add_option("--only", only, "Run only the named criteria");
  CLI11_PARSE(app, argc, argv);

  const fs::path work = work_arg.empty() ? fs::temp_directory_path() / "wheelarm_acceptance" : fs::path(work_arg);
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"ik", ik_suite},
      {"algebra", algebra_suite},
      {"diff_drive", diff_drive_suite},
      {"alignment", alignment_suite},
      {"pipeline_determinism", [&] { return pipeline_determinism(work); }},
      {"gradient_check", gradient_check},
      {"learnability", [&] { return learnability(work); }},
      {"container", [&] { return container_suite(work); }},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %-21s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
