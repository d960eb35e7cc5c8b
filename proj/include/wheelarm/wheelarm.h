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

/* C interface to the WheelArm core library.
 *
 * All functions return a wa_status. On failure the calling thread's last
 * error message is available from wa_last_error(). Strings returned through
 * char** out-parameters are owned by the caller and released with
 * wa_string_free(). */
#ifndef WHEELARM_WHEELARM_H_
#define WHEELARM_WHEELARM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define WA_API __declspec(dllexport)
#elif defined(WHEELARM_BUILDING_LIBRARY)
#define WA_API __attribute__((visibility("default")))
#else
#define WA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wa_status {
  WA_OK = 0,
  WA_INVALID_ARGUMENT = 1,
  WA_DIMENSION_MISMATCH = 2,
  WA_NON_ORTHOGONAL_INPUT = 3,
  WA_MAX_ITERATIONS_EXCEEDED = 4,
  WA_JOINT_LIMIT_VIOLATION = 5,
  WA_SCHEMA_ERROR = 6,
  WA_OUT_OF_REACH = 7,
  WA_MALFORMED_COMMAND = 8,
  WA_IK_REJECTED = 9,
  WA_SESSION_ALREADY_ACTIVE = 10,
  WA_NO_ACTIVE_SESSION = 11,
  WA_SCRIPT_ERROR = 12,
  WA_OUT_OF_RANGE = 13,
  WA_EMPTY_TOPIC = 14,
  WA_NO_OVERLAP = 15,
  WA_IO_ERROR = 16,
  WA_CORRUPT_CONTAINER = 17,
  WA_SCHEMA_MISMATCH = 18,
  WA_SHAPE_MISMATCH = 19,
  WA_INSUFFICIENT_DATA = 20,
  WA_NOT_OPERATOR = 21,
  WA_INTERNAL = 22
} wa_status;

typedef struct wa_robot wa_robot;
typedef struct wa_scene wa_scene;
typedef struct wa_server wa_server;

/* Library version, e.g. "1.0.0". */
WA_API const char* wa_version(void);
/* JSON object naming the chain, robot, scene, dataset, script and model formats. */
WA_API const char* wa_format_versions(void);
/* Taxonomy name of a status, e.g. "IkRejected". */
WA_API const char* wa_status_name(wa_status status);
/* Message of the last failure on this thread; empty after a success. */
WA_API const char* wa_last_error(void);
WA_API void wa_string_free(char* s);

/* "trace", "debug", "info", "warn", "error" or "off". */
WA_API wa_status wa_set_log_level(const char* level);

/* path may be NULL for the built-in configuration. A robot file
 * ("wheelarm-robot/1") or a bare chain file ("wheelarm-chain/1", paired with
 * the built-in wheelchair) is accepted. */
WA_API wa_status wa_robot_load(const char* path, wa_robot** out);
WA_API void wa_robot_free(wa_robot* robot);
WA_API wa_status wa_scene_load(const char* path, wa_scene** out);
WA_API void wa_scene_free(wa_scene* scene);

/* Forward kinematics of the arm chain. joints has dof entries; pose_out
 * receives the 4x4 end-effector pose, row-major. */
WA_API wa_status wa_fk(const wa_robot* robot, const double* joints, size_t dof, double pose_out[16]);

/* Inverse kinematics. target_json is {"pose": 4x4} or {"position": [3],
 * "quaternion": [x, y, z, w]}, optionally with "seed": [dof]. result_json
 * receives {"joints", "residual", "iterations", "converged"}. */
WA_API wa_status wa_ik(const wa_robot* robot, const char* target_json, char** result_json);

/* Replays a script into <out_dir>/raw.watr. seed overrides the script's
 * seed when has_seed is nonzero. summary_json lists the container path and
 * per-topic counts. */
WA_API wa_status wa_replay(const wa_robot* robot, const wa_scene* scene, const char* script_path, int has_seed,
                           uint64_t seed, const char* out_dir, char** summary_json);

/* Aligns a raw container onto a camera's timestamps, writing
 * <out_dir>/aligned.watr. reference_camera may be NULL for "chassis". */
WA_API wa_status wa_align(const char* raw_path, const char* out_dir, const char* reference_camera, char** summary_json);

/* Topic table of a container, as text or (as_json nonzero) JSON. */
WA_API wa_status wa_inspect(const char* container_path, int as_json, char** text);

/* Called once per finished epoch with a JSON record. */
typedef void (*wa_epoch_callback)(const char* epoch_json, void* user);

/* Trains on every aligned container under data_dir. config_path names a
 * JSON training config and may be NULL for defaults. seed overrides the config seed when has_seed is nonzero. */
WA_API wa_status wa_train(const char* data_dir, const char* config_path, int has_seed, uint64_t seed,
                          const char* model_path, wa_epoch_callback on_epoch, void* user, char** summary_json);

/* Evaluates a model on every aligned container under data_dir. overlays_dir
 * may be NULL. summary_json holds the per-channel table. */
WA_API wa_status wa_eval(const char* model_path, const char* data_dir, const char* report_path,
                         const char* overlays_dir, char** summary_json);

/* options_json keys: host, port, seed, out_dir, ui_dir, start_pose [x, y, yaw],
 * handle_signals. The server is listening when this returns. */
WA_API wa_status wa_server_create(const wa_robot* robot, const wa_scene* scene, const char* options_json,
                                  wa_server** out);
WA_API uint16_t wa_server_port(const wa_server* server);
/* Blocks until wa_server_stop() or a handled signal. */
WA_API wa_status wa_server_run(wa_server* server);
/* Thread-safe. */
WA_API void wa_server_stop(wa_server* server);
WA_API void wa_server_free(wa_server* server);

#ifdef __cplusplus
}
#endif

#endif /* WHEELARM_WHEELARM_H_ */
