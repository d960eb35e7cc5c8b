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

#include "wheelarm/wheelarm.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include <spdlog/spdlog.h>

#include "common/error.hpp"
#include "common/json_util.hpp"
#include "dataset/align.hpp"
#include "dataset/container.hpp"
#include "dataset/inspect.hpp"
#include "kinematics/chain.hpp"
#include "kinematics/ik.hpp"
#include "learning/evaluate.hpp"
#include "learning/train.hpp"
#include "robot/robot.hpp"
#include "scene/scene.hpp"
#include "server/server.hpp"
#include "teleop/script.hpp"

using namespace wheelarm;
namespace fs = std::filesystem;

struct wa_robot {
  robot::RobotConfig config;
};

struct wa_scene {
  scene::Scene scene;
};

struct wa_server {
  std::unique_ptr<server::Server> server;
};

namespace {

static_assert(static_cast<int>(ErrorCode::kInternal) + 1 == WA_INTERNAL);
static_assert(static_cast<int>(ErrorCode::kNotOperator) + 1 == WA_NOT_OPERATOR);

thread_local std::string g_last_error;

wa_status to_status(ErrorCode code) { return static_cast<wa_status>(static_cast<int>(code) + 1); }

template <class F>
wa_status guard(F&& fn) {
  g_last_error.clear();
  try {
    fn();
    return WA_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const Json::exception& e) {
    g_last_error = e.what();
    return WA_SCHEMA_ERROR;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return WA_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WA_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return WA_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) fail(ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(char** out, const Json& j) {
  if (out != nullptr) *out = dup_string(j.dump(2));
}

Json count_samples(const dataset::Recording& rec) {
  Json samples = Json::object();
  for (const auto& t : rec.topics) samples[t.name] = t.rows();
  Json frames = Json::object();
  for (const auto& [cam, images] : rec.frames) frames[cam] = images.size();
  return Json{{"samples", samples}, {"frames", frames}};
}

std::vector<learning::TrajectoryFeatures> load_aligned(const fs::path& data_dir, const std::string& camera) {
  std::vector<learning::TrajectoryFeatures> out;
  for (const fs::path& dir : dataset::find_containers(data_dir)) {
    if (dataset::read_container_kind(dir) != "aligned") {
      spdlog::debug("skipping {}: not an aligned container", dir.string());
      continue;
    }
    out.push_back(learning::featurize(dataset::read_container(dir), camera));
    if (out.back().session_id.empty()) out.back().session_id = dir.parent_path().filename().string();
  }
  if (out.empty()) fail(ErrorCode::kInsufficientData, "no aligned containers under " + data_dir.string());
  return out;
}

kin::RigidTransform parse_target(const Json& j) {
  if (j.contains("pose")) {
    const Json& p = j.at("pose");
    kin::Mat4 m;
    if (!p.is_array() || p.size() != 4) fail(ErrorCode::kSchemaError, "target.pose: expected a 4x4 array");
    for (int r = 0; r < 4; ++r) {
      if (!p[r].is_array() || p[r].size() != 4) fail(ErrorCode::kSchemaError, "target.pose: expected a 4x4 array");
      for (int c = 0; c < 4; ++c) m(r, c) = p[r][c].get<double>();
    }
    return kin::RigidTransform::from_matrix(m);
  }
  const std::vector<double> pos = require_numbers(j, "position", "target", 3);
  const std::vector<double> q = require_numbers(j, "quaternion", "target", 4);
  kin::RigidTransform t;
  t.translation = kin::Vec3(pos[0], pos[1], pos[2]);
  t.rotation = kin::quat_xyzw_to_rotation(kin::Vec4(q[0], q[1], q[2], q[3]).normalized());
  return t;
}

}  // namespace

extern "C" {

const char* wa_version(void) { return WHEELARM_VERSION; }

const char* wa_format_versions(void) {
  static const std::string text = Json{{"chain", kin::kChainFormat},
                                       {"robot", robot::kRobotFormat},
                                       {"scene", scene::kSceneFormat},
                                       {"dataset", dataset::kDatasetFormat},
                                       {"script", teleop::kScriptFormat},
                                       {"model", learning::kModelFormat},
                                       {"protocol", server::kProtocol}}
                                      .dump();
  return text.c_str();
}

const char* wa_status_name(wa_status status) {
  if (status == WA_OK) return "Ok";
  if (status < WA_OK || status > WA_INTERNAL) return "Unknown";
  static thread_local std::string name;
  name = std::string(error_name(static_cast<ErrorCode>(static_cast<int>(status) - 1)));
  return name.c_str();
}

const char* wa_last_error(void) { return g_last_error.c_str(); }

void wa_string_free(char* s) { std::free(s); }

wa_status wa_set_log_level(const char* level) {
  return guard([&] {
    require(level, "level");
    const auto lvl = spdlog::level::from_str(level);
    if (lvl == spdlog::level::off && std::string(level) != "off") {
      fail(ErrorCode::kInvalidArgument, std::string("unknown log level '") + level + "'");
    }
    spdlog::set_level(lvl);
  });
}

wa_status wa_robot_load(const char* path, wa_robot** out) {
  return guard([&] {
    require(out, "out");
    auto r = std::make_unique<wa_robot>();
    if (path == nullptr) {
      r->config = robot::default_robot_config();
    } else {
      const Json doc = read_json_file(path);
      if (doc.is_object() && doc.value("format", "") == kin::kChainFormat) {
        r->config = robot::default_robot_config();
        r->config.chain = kin::chain_from_json(doc);
        if (static_cast<std::size_t>(r->config.initial_joints.size()) != r->config.chain.dof()) {
          r->config.initial_joints = kin::JointVector::Zero(static_cast<Eigen::Index>(r->config.chain.dof()));
        }
      } else {
        r->config = robot::robot_config_from_json(doc, fs::path(path).parent_path());
      }
    }
    *out = r.release();
  });
}

void wa_robot_free(wa_robot* robot) { delete robot; }

wa_status wa_scene_load(const char* path, wa_scene** out) {
  return guard([&] {
    require(out, "out");
    auto s = std::make_unique<wa_scene>();
    s->scene = path == nullptr ? scene::default_scene() : scene::load_scene(path);
    *out = s.release();
  });
}

void wa_scene_free(wa_scene* scene) { delete scene; }

wa_status wa_fk(const wa_robot* robot, const double* joints, size_t dof, double pose_out[16]) {
  return guard([&] {
    require(robot, "robot");
    require(joints, "joints");
    require(pose_out, "pose_out");
    const kin::JointVector q = Eigen::Map<const kin::JointVector>(joints, static_cast<Eigen::Index>(dof));
    const kin::Mat4 m = kin::poe_fk(robot->config.chain, q).matrix();
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) pose_out[r * 4 + c] = m(r, c);
    }
  });
}

wa_status wa_ik(const wa_robot* robot, const char* target_json, char** result_json) {
  return guard([&] {
    require(robot, "robot");
    require(target_json, "target_json");
    Json j;
    try {
      j = Json::parse(target_json);
    } catch (const Json::exception& e) {
      fail(ErrorCode::kSchemaError, std::string("target: ") + e.what());
    }
    if (!j.is_object()) fail(ErrorCode::kSchemaError, "target: expected a JSON object");
    const kin::ChainDescription& chain = robot->config.chain;
    kin::JointVector seed = robot->config.initial_joints;
    if (j.contains("seed")) {
      const std::vector<double> s = require_numbers(j, "seed", "target", chain.dof());
      seed = Eigen::Map<const kin::JointVector>(s.data(), static_cast<Eigen::Index>(s.size()));
    }
    const kin::IkSolution sol = kin::ik_newton_raphson(chain, parse_target(j), seed);
    std::vector<double> q(sol.q.data(), sol.q.data() + sol.q.size());
    put(result_json, Json{{"joints", q}, {"residual", sol.residual}, {"iterations", sol.iterations}, {"converged", true}});
  });
}

wa_status wa_replay(const wa_robot* robot, const wa_scene* scene, const char* script_path, int has_seed, uint64_t seed,
                    const char* out_dir, char** summary_json) {
  return guard([&] {
    require(robot, "robot");
    require(scene, "scene");
    require(script_path, "script_path");
    require(out_dir, "out_dir");
    const teleop::Script script = teleop::load_script(script_path, robot->config);
    const teleop::ReplayResult r = teleop::replay_script(
        script, robot->config, scene->scene, has_seed ? std::optional<std::uint64_t>(seed) : std::nullopt);
    const fs::path dir = fs::path(out_dir) / "raw.watr";
    dataset::write_container(r.recording, dir);
    Json summary = count_samples(r.recording);
    summary["container"] = dir.string();
    summary["session_id"] = r.recording.manifest.session_id;
    summary["seed"] = r.recording.manifest.seed;
    summary["commands"] = r.acks.size();
    summary["rejected"] = r.rejected;
    put(summary_json, summary);
  });
}

wa_status wa_align(const char* raw_path, const char* out_dir, const char* reference_camera, char** summary_json) {
  return guard([&] {
    require(raw_path, "raw_path");
    require(out_dir, "out_dir");
    dataset::AlignOptions opts;
    if (reference_camera != nullptr) opts.reference_camera = reference_camera;
    const dataset::Recording aligned = dataset::align_recording(dataset::read_container(raw_path), opts);
    const fs::path dir = fs::path(out_dir) / "aligned.watr";
    dataset::write_container(aligned, dir);
    Json summary = count_samples(aligned);
    summary["container"] = dir.string();
    summary["reference_camera"] = opts.reference_camera;
    summary["trimmed_reference_frames"] = aligned.meta.value("trimmed_reference_frames", 0);
    put(summary_json, summary);
  });
}

wa_status wa_inspect(const char* container_path, int as_json, char** text) {
  return guard([&] {
    require(container_path, "container_path");
    require(text, "text");
    const dataset::Recording rec = dataset::read_container(container_path);
    *text = dup_string(as_json ? dataset::summary_to_json(rec).dump(2) + "\n" : dataset::format_summary(rec));
  });
}

wa_status wa_train(const char* data_dir, const char* config_path, int has_seed, uint64_t seed, const char* model_path,
                   wa_epoch_callback on_epoch, void* user, char** summary_json) {
  return guard([&] {
    require(data_dir, "data_dir");
    require(model_path, "model_path");
    learning::TrainConfig cfg =
        config_path == nullptr ? learning::TrainConfig{} : learning::TrainConfig::from_json(read_json_file(config_path));
    if (has_seed) cfg.seed = seed;
    const auto trajs = load_aligned(data_dir, cfg.camera);
    spdlog::info("training on {} trajectories", trajs.size());
    const learning::TrainResult r = learning::train(trajs, cfg, [&](const learning::EpochRecord& e) {
      spdlog::info("epoch {} lr {:.3g} train {:.6g} val {:.6g}", e.epoch + 1, e.lr, e.train_loss, e.val_loss);
      if (on_epoch != nullptr) {
        const std::string text = Json{{"epoch", e.epoch},
                                      {"lr", e.lr},
                                      {"train_loss", e.train_loss},
                                      {"val_loss", e.val_loss},
                                      {"max_grad_norm", e.max_grad_norm}}
                                     .dump();
        on_epoch(text.c_str(), user);
      }
    });
    const learning::Model model = learning::model_from_result(r, cfg);
    learning::save_model(model, model_path);
    put(summary_json, Json{{"model", model_path},
                           {"trajectories", trajs.size()},
                           {"train_sessions", r.train_sessions},
                           {"validation_sessions", r.val_sessions},
                           {"epochs", r.history.size()},
                           {"best_epoch", r.best_epoch},
                           {"first_val_loss", r.history.front().val_loss},
                           {"best_val_loss", r.history[static_cast<std::size_t>(r.best_epoch)].val_loss},
                           {"stopped_early", r.stopped_early},
                           {"parameter_count", model.params.count()}});
  });
}

wa_status wa_eval(const char* model_path, const char* data_dir, const char* report_path, const char* overlays_dir,
                  char** summary_json) {
  return guard([&] {
    require(model_path, "model_path");
    require(data_dir, "data_dir");
    require(report_path, "report_path");
    const learning::Model model = learning::load_model(model_path);
    const auto trajs = load_aligned(data_dir, model.config.camera);
    const learning::EvalReport report = learning::evaluate(model, trajs);
    learning::write_report(report, report_path);
    if (overlays_dir != nullptr) learning::write_overlays(report, overlays_dir);
    Json channels = Json::array();
    for (const auto& c : report.channels) {
      channels.push_back(Json{{"channel", c.channel},
                              {"min_mse", c.min_mse},
                              {"max_mse", c.max_mse},
                              {"min_mae", c.min_mae},
                              {"max_mae", c.max_mae}});
    }
    put(summary_json, Json{{"report", report_path}, {"trajectories", trajs.size()}, {"channels", channels}});
  });
}

wa_status wa_server_create(const wa_robot* robot, const wa_scene* scene, const char* options_json, wa_server** out) {
  return guard([&] {
    require(robot, "robot");
    require(scene, "scene");
    require(out, "out");
    server::ServerOptions opts;
    if (options_json != nullptr) {
      Json j;
      try {
        j = Json::parse(options_json);
      } catch (const Json::exception& e) {
        fail(ErrorCode::kSchemaError, std::string("server options: ") + e.what());
      }
      opts.host = j.value("host", opts.host);
      opts.port = j.value("port", opts.port);
      opts.seed = j.value("seed", opts.seed);
      opts.out_dir = j.value("out_dir", opts.out_dir.string());
      if (j.contains("ui_dir") && !j["ui_dir"].is_null()) opts.ui_dir = j["ui_dir"].get<std::string>();
      if (j.contains("start_pose")) {
        const std::vector<double> p = require_numbers(j, "start_pose", "server options", 3);
        opts.sim.start_pose = {p[0], p[1], p[2]};
      }
      opts.handle_signals = j.value("handle_signals", false);
    }
    auto s = std::make_unique<wa_server>();
    s->server = std::make_unique<server::Server>(robot->config, scene->scene, opts);
    *out = s.release();
  });
}

uint16_t wa_server_port(const wa_server* server) { return server == nullptr ? 0 : server->server->port(); }

wa_status wa_server_run(wa_server* server) {
  return guard([&] {
    require(server, "server");
    server->server->run();
  });
}

void wa_server_stop(wa_server* server) {
  if (server != nullptr) server->server->stop();
}

void wa_server_free(wa_server* server) { delete server; }

}  // extern "C"
