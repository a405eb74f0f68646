// Copyright 2026 The Quadloco Authors.
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

/* C interface to the quadloco library.
 *
 * Every function returning ql_status reports failures through the status and
 * a thread-local message retrieved with ql_last_error(). Handles are opaque
 * and owned by the caller; the matching *_free function accepts NULL.
 *
 * Output strings use a caller buffer: on success the text and its NUL fit in
 * `size` bytes. `*needed`, when non-NULL, always receives the required size,
 * and a short buffer yields QL_ERR_INVALID_ARGUMENT.
 */

#ifndef QUADLOCO_QUADLOCO_H_
#define QUADLOCO_QUADLOCO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QL_API __declspec(dllexport)
#else
#define QL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ql_status {
  QL_OK = 0,
  QL_ERR_INVALID_ARGUMENT = 1,
  QL_ERR_CONFIG = 2,
  QL_ERR_RUNTIME = 3,
  QL_ERR_INCONCLUSIVE = 4,
  QL_ERR_IO = 5,
  QL_ERR_DIVERGED = 6,
  QL_ERR_CONTRACT = 7,
  QL_ERR_SHAPE = 8,
  QL_ERR_NUMERIC = 9,
  QL_ERR_INTERNAL = 10
} ql_status;

#define QL_OBS_DIM 48
#define QL_ACTION_DIM 12

typedef struct ql_config ql_config;
typedef struct ql_policy ql_policy;
typedef struct ql_controller ql_controller;
typedef struct ql_env ql_env;

/* Progress messages from the long-running pipelines. */
typedef void (*ql_log_fn)(const char* message, void* user);

QL_API const char* ql_version(void);
QL_API const char* ql_status_name(ql_status status);
/* Message of the last failure on the calling thread, "" if none. */
QL_API const char* ql_last_error(void);
/* Process exit code for a status: 0 ok, 2 config or input error, 3 runtime
 * failure, 4 inconclusive impact test. */
QL_API int ql_exit_code(ql_status status);

/* Reference text: every config key with its default and meaning. */
QL_API const char* ql_config_reference(void);
/* Reference text: the header of every CSV the pipelines write. */
QL_API const char* ql_csv_schemas(void);

/* ---- Run configuration ------------------------------------------------ */

QL_API ql_status ql_config_new(ql_config** out);
QL_API ql_status ql_config_load(const char* path, ql_config** out);
QL_API ql_status ql_config_set(ql_config* config, const char* key, const char* value);
QL_API ql_status ql_config_get(const ql_config* config, const char* key, char* buf,
                               size_t size, size_t* needed);
/* Applies QUADLOCO_<KEY> environment variables. */
QL_API ql_status ql_config_apply_env(ql_config* config);
/* for_training != 0 also requires the epochs key. */
QL_API ql_status ql_config_validate(const ql_config* config, int for_training);
QL_API ql_status ql_config_to_text(const ql_config* config, char* buf, size_t size,
                                   size_t* needed);
QL_API void ql_config_free(ql_config* config);

/* ---- Pipelines ---------------------------------------------------------
 * A NULL out_dir means <out_dir>/<run_id> of the configuration. */

/* Trains into <out_dir>/<run_id>. Invalid configurations fail with
 * QL_ERR_CONFIG before the run directory is created; failures during
 * training return QL_ERR_RUNTIME. */
QL_API ql_status ql_train(const ql_config* config, ql_log_fn log, void* user);

/* protocol: "linear", "angular", "hold" or "all". `controller_path` may name
 * a controller artifact, a policy document or a training checkpoint. */
QL_API ql_status ql_eval_tracking(const ql_config* config, const char* controller_path,
                                  const char* protocol, const char* out_dir,
                                  ql_log_fn log, void* user);

/* Writes impact_report.json and, when decisive, controller.json. */
QL_API ql_status ql_impact_test(const ql_config* config, const char* policy_path,
                                const char* out_dir, ql_log_fn log, void* user);

/* seeds == NULL uses the symmetry_seeds key. */
QL_API ql_status ql_symmetry_report(const ql_config* config, const uint64_t* seeds,
                                    size_t num_seeds, const char* out_dir, ql_log_fn log,
                                    void* user);

QL_API ql_status ql_export_plots(const char* run_dir, size_t* plots_written,
                                 ql_log_fn log, void* user);

/* ---- Policies and controllers ------------------------------------------ */

/* Accepts a policy document or a training checkpoint. */
QL_API ql_status ql_policy_load(const char* path, ql_policy** out);
/* Deterministic action (the Gaussian mean). */
QL_API ql_status ql_policy_act(const ql_policy* policy, const double* obs, size_t obs_len,
                               double* action, size_t action_len);
QL_API void ql_policy_free(ql_policy* policy);

QL_API ql_status ql_controller_load(const char* path, ql_controller** out);
QL_API ql_status ql_controller_act(ql_controller* controller, const double* obs,
                                   size_t obs_len, double* action, size_t action_len);
QL_API ql_status ql_controller_reset(ql_controller* controller);
QL_API void ql_controller_free(ql_controller* controller);

/* ---- Environment -------------------------------------------------------- */

/* Flat-terrain environment. config may be NULL for defaults. */
QL_API ql_status ql_env_new(const ql_config* config, uint64_t seed, ql_env** out);
QL_API ql_status ql_env_reset(ql_env* env, double* obs, size_t obs_len);
QL_API ql_status ql_env_step(ql_env* env, const double* action, size_t action_len,
                             double* obs, size_t obs_len, double* reward, int* done);
QL_API void ql_env_free(ql_env* env);

#ifdef __cplusplus
}
#endif

#endif /* QUADLOCO_QUADLOCO_H_ */
