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

#include "quadloco/quadloco.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "quadloco/app/pipelines.hpp"
#include "quadloco/app/run_config.hpp"
#include "quadloco/error.hpp"
#include "quadloco/nn/checkpoint.hpp"

struct ql_config {
  quadloco::app::RunConfig value;
};

struct ql_policy {
  quadloco::nn::Policy value;
};

struct ql_controller {
  quadloco::mirror::Controller value;
};

struct ql_env {
  quadloco::env::Env value;
};

namespace {

using quadloco::Error;
using quadloco::ErrorCode;

thread_local std::string g_last_error;

ql_status fail(ql_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

ql_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return QL_ERR_INVALID_ARGUMENT;
    case ErrorCode::kConfig: return QL_ERR_CONFIG;
    case ErrorCode::kRuntime: return QL_ERR_RUNTIME;
    case ErrorCode::kInconclusive: return QL_ERR_INCONCLUSIVE;
    case ErrorCode::kIo: return QL_ERR_IO;
    case ErrorCode::kDiverged: return QL_ERR_DIVERGED;
    case ErrorCode::kContract: return QL_ERR_CONTRACT;
    case ErrorCode::kShape: return QL_ERR_SHAPE;
    case ErrorCode::kNumeric: return QL_ERR_NUMERIC;
  }
  return QL_ERR_INTERNAL;
}

// Runs `body`, translating exceptions into a status and the thread-local
// message.
template <class F>
ql_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return QL_OK;
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QL_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(QL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QL_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

void copy_out(const std::string& text, char* buf, std::size_t size, std::size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (buf == nullptr || size < text.size() + 1) {
    throw Error(ErrorCode::kInvalidArgument, "output buffer too small");
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
}

quadloco::app::Logger logger(ql_log_fn log, void* user) {
  if (log == nullptr) return {};
  return [log, user](const std::string& message) { log(message.c_str(), user); };
}

std::string output_dir(const ql_config* config, const char* out_dir) {
  return out_dir ? std::string(out_dir) : config->value.run_dir();
}

std::string build_reference() {
  std::string text;
  for (const auto& key : quadloco::app::config_keys()) {
    text += "  " + key.name + " = " + (key.default_value.empty() && key.name == "epochs"
                                             ? std::string("(required)")
                                             : key.default_value) +
            "\n      " + key.doc + "\n";
  }
  return text;
}

std::string build_schemas() {
  using namespace quadloco;
  std::string text;
  text += std::string("  telemetry.csv: ") + ppo::kTelemetryHeader + "\n";
  text += std::string("  eval.csv: ") + ppo::kEvalHeader + "\n";
  text += std::string("  linear.csv: ") + app::kLinearHeader + "\n";
  text += std::string("  angular.csv: ") + app::kAngularHeader + "\n";
  text += std::string("  angular_trace.csv: ") + app::kAngularTraceHeader + "\n";
  text += std::string("  hold.csv: ") + app::kHoldHeader + "\n";
  text += "  trajectory_<protocol>.csv (trajectory_dump=true): segment,t,px,py,pz,qw,qx,qy,qz,"
          "vx,vy,vz,wx,wy,wz,theta_0..11,tau_0..11,foot_0..3,knee_0..3,body\n";
  text += "  symmetry_no_dr.csv, symmetry_dr.csv: epoch,mean_ratio,ci_low,ci_high,seed_<s>...\n";
  return text;
}

}  // namespace

extern "C" {

const char* ql_version(void) { return "1.0.0"; }

const char* ql_status_name(ql_status status) {
  switch (status) {
    case QL_OK: return "ok";
    case QL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QL_ERR_CONFIG: return "configuration error";
    case QL_ERR_RUNTIME: return "runtime error";
    case QL_ERR_INCONCLUSIVE: return "inconclusive";
    case QL_ERR_IO: return "input/output error";
    case QL_ERR_DIVERGED: return "simulation diverged";
    case QL_ERR_CONTRACT: return "contract violation";
    case QL_ERR_SHAPE: return "shape mismatch";
    case QL_ERR_NUMERIC: return "numeric error";
    case QL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ql_last_error(void) { return g_last_error.c_str(); }

int ql_exit_code(ql_status status) {
  switch (status) {
    case QL_OK: return 0;
    case QL_ERR_INVALID_ARGUMENT:
    case QL_ERR_CONFIG:
    case QL_ERR_IO:
    case QL_ERR_SHAPE: return 2;
    case QL_ERR_INCONCLUSIVE: return 4;
    default: return 3;
  }
}

const char* ql_config_reference(void) {
  static const std::string text = build_reference();
  return text.c_str();
}

const char* ql_csv_schemas(void) {
  static const std::string text = build_schemas();
  return text.c_str();
}

ql_status ql_config_new(ql_config** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = new ql_config{};
  });
}

ql_status ql_config_load(const char* path, ql_config** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "path and out must not be NULL");
    *out = nullptr;
    auto config = std::make_unique<ql_config>();
    config->value = quadloco::app::load_run_config(path);
    *out = config.release();
  });
}

ql_status ql_config_set(ql_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config && key && value, "config, key and value must not be NULL");
    quadloco::app::set_config_value(config->value, key, value);
  });
}

ql_status ql_config_get(const ql_config* config, const char* key, char* buf, size_t size,
                        size_t* needed) {
  return guarded([&] {
    require(config && key, "config and key must not be NULL");
    copy_out(quadloco::app::get_config_value(config->value, key), buf, size, needed);
  });
}

ql_status ql_config_apply_env(ql_config* config) {
  return guarded([&] {
    require(config != nullptr, "config is NULL");
    quadloco::app::apply_env_overrides(config->value);
  });
}

ql_status ql_config_validate(const ql_config* config, int for_training) {
  return guarded([&] {
    require(config != nullptr, "config is NULL");
    if (for_training) {
      config->value.validate_for_training();
    } else {
      config->value.validate();
    }
  });
}

ql_status ql_config_to_text(const ql_config* config, char* buf, size_t size, size_t* needed) {
  return guarded([&] {
    require(config != nullptr, "config is NULL");
    copy_out(config->value.to_text(), buf, size, needed);
  });
}

void ql_config_free(ql_config* config) { delete config; }

ql_status ql_train(const ql_config* config, ql_log_fn log, void* user) {
  ql_status s = guarded([&] {
    require(config != nullptr, "config is NULL");
    config->value.validate_for_training();
  });
  if (s != QL_OK) return s;
  s = guarded([&] { quadloco::app::run_train(config->value, logger(log, user)); });
  // Anything failing once training has started is a runtime failure.
  if (s != QL_OK && s != QL_ERR_RUNTIME) return fail(QL_ERR_RUNTIME, g_last_error);
  return s;
}

ql_status ql_eval_tracking(const ql_config* config, const char* controller_path,
                           const char* protocol, const char* out_dir, ql_log_fn log,
                           void* user) {
  return guarded([&] {
    require(config && controller_path && protocol,
            "config, controller_path and protocol must not be NULL");
    quadloco::app::Actor actor = quadloco::app::load_actor(controller_path);
    quadloco::app::run_eval_tracking(config->value, actor, protocol,
                                     output_dir(config, out_dir), logger(log, user));
  });
}

ql_status ql_impact_test(const ql_config* config, const char* policy_path, const char* out_dir,
                         ql_log_fn log, void* user) {
  return guarded([&] {
    require(config && policy_path, "config and policy_path must not be NULL");
    const quadloco::nn::Policy policy = quadloco::nn::load_policy(policy_path);
    quadloco::app::run_impact_test(config->value, policy, output_dir(config, out_dir),
                                   logger(log, user));
  });
}

ql_status ql_symmetry_report(const ql_config* config, const uint64_t* seeds, size_t num_seeds,
                             const char* out_dir, ql_log_fn log, void* user) {
  return guarded([&] {
    require(config != nullptr, "config is NULL");
    std::vector<std::uint64_t> list = config->value.symmetry_seeds;
    if (seeds != nullptr) list.assign(seeds, seeds + num_seeds);
    quadloco::app::run_symmetry_report(config->value, list, output_dir(config, out_dir),
                                       logger(log, user));
  });
}

ql_status ql_export_plots(const char* run_dir, size_t* plots_written, ql_log_fn log,
                          void* user) {
  return guarded([&] {
    require(run_dir != nullptr, "run_dir is NULL");
    const auto result = quadloco::app::export_plots(run_dir, logger(log, user));
    if (plots_written) *plots_written = result.written.size();
  });
}

ql_status ql_policy_load(const char* path, ql_policy** out) {
  return guarded([&] {
    require(path && out, "path and out must not be NULL");
    *out = nullptr;
    *out = new ql_policy{quadloco::nn::load_policy(path)};
  });
}

ql_status ql_policy_act(const ql_policy* policy, const double* obs, size_t obs_len,
                        double* action, size_t action_len) {
  return guarded([&] {
    require(policy && obs && action, "policy, obs and action must not be NULL");
    const auto& net = policy->value.net;
    if (obs_len != static_cast<size_t>(net.input_size()) ||
        action_len != static_cast<size_t>(net.output_size())) {
      throw quadloco::ShapeError("policy_act: buffer sizes do not match the network");
    }
    const Eigen::Map<const Eigen::VectorXd> x(obs, static_cast<Eigen::Index>(obs_len));
    const Eigen::VectorXd y = policy->value.mean(x);
    std::memcpy(action, y.data(), action_len * sizeof(double));
  });
}

void ql_policy_free(ql_policy* policy) { delete policy; }

ql_status ql_controller_load(const char* path, ql_controller** out) {
  return guarded([&] {
    require(path && out, "path and out must not be NULL");
    *out = nullptr;
    *out = new ql_controller{quadloco::mirror::load_controller(path)};
  });
}

ql_status ql_controller_act(ql_controller* controller, const double* obs, size_t obs_len,
                            double* action, size_t action_len) {
  return guarded([&] {
    require(controller && obs && action, "controller, obs and action must not be NULL");
    if (obs_len != QL_OBS_DIM || action_len != QL_ACTION_DIM) {
      throw quadloco::ShapeError("controller_act: expected 48 observations and 12 actions");
    }
    quadloco::env::Observation o;
    std::memcpy(o.data(), obs, sizeof(double) * QL_OBS_DIM);
    const quadloco::sim::JointVector a = controller->value.act(o);
    std::memcpy(action, a.data(), sizeof(double) * QL_ACTION_DIM);
  });
}

ql_status ql_controller_reset(ql_controller* controller) {
  return guarded([&] {
    require(controller != nullptr, "controller is NULL");
    controller->value.reset();
  });
}

void ql_controller_free(ql_controller* controller) { delete controller; }

ql_status ql_env_new(const ql_config* config, uint64_t seed, ql_env** out) {
  return guarded([&] {
    require(out != nullptr, "out is NULL");
    *out = nullptr;
    const quadloco::app::RunConfig defaults;
    const quadloco::app::RunConfig& c = config ? config->value : defaults;
    c.validate();
    *out = new ql_env{quadloco::env::Env(c.env_config(),
                                         std::make_shared<const quadloco::sim::Terrain>(), seed)};
  });
}

ql_status ql_env_reset(ql_env* env, double* obs, size_t obs_len) {
  return guarded([&] {
    require(env && obs, "env and obs must not be NULL");
    if (obs_len != QL_OBS_DIM) throw quadloco::ShapeError("env_reset: expected 48 observations");
    const auto& o = env->value.reset();
    std::memcpy(obs, o.data(), sizeof(double) * QL_OBS_DIM);
  });
}

ql_status ql_env_step(ql_env* env, const double* action, size_t action_len, double* obs,
                      size_t obs_len, double* reward, int* done) {
  return guarded([&] {
    require(env && action && obs, "env, action and obs must not be NULL");
    if (action_len != QL_ACTION_DIM || obs_len != QL_OBS_DIM) {
      throw quadloco::ShapeError("env_step: expected 12 actions and 48 observations");
    }
    quadloco::sim::JointVector a;
    std::memcpy(a.data(), action, sizeof(double) * QL_ACTION_DIM);
    const auto r = env->value.step(a);
    std::memcpy(obs, r.obs.data(), sizeof(double) * QL_OBS_DIM);
    if (reward) *reward = r.reward;
    if (done) *done = r.done ? 1 : 0;
  });
}

void ql_env_free(ql_env* env) { delete env; }

}  // extern "C"
