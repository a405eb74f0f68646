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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "quadloco/app/csv.hpp"
#include "quadloco/app/pipelines.hpp"
#include "quadloco/error.hpp"
#include "quadloco/nn/checkpoint.hpp"
#include "quadloco/sim/simulator.hpp"

namespace quadloco::app {

namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int steps_per_second(const env::EnvConfig& cfg) {
  const double per = 1.0 / cfg.control_dt();
  const long n = std::lround(per);
  if (n < 1 || std::abs(n * cfg.control_dt() - 1.0) > 1e-9) {
    throw ConfigError("tracking: the control period must divide one second");
  }
  return static_cast<int>(n);
}

int steps_for(double seconds, const env::EnvConfig& cfg) {
  return static_cast<int>(std::lround(seconds / cfg.control_dt()));
}

env::StepResult advance(env::Env& e, Actor& actor, const TrackingSettings& s, int segment) {
  env::StepResult r = e.step(actor.act(e.observation()));
  if (s.trajectory != nullptr) s.trajectory->record(segment, e.state(), r.info.tau);
  return r;
}

// Fresh flat-terrain environment at rest, settled under a zero command.
// Returns false if the robot fell while settling.
bool start_episode(env::Env& e, Actor& actor, const TrackingSettings& s, int segment = 0) {
  if (actor.reset) actor.reset();
  e.reset_to(sim::standing_state(s.env.model, e.terrain(), 0.0, 0.0, 0.0, s.env.spawn_height),
             env::Command{});
  const int n = steps_for(s.settle, s.env);
  for (int k = 0; k < n; ++k) {
    if (advance(e, actor, s, segment).done) return false;
  }
  return true;
}

const char* flag(bool b) { return b ? "1" : "0"; }

// Runs a protocol, recording trajectory_<name>.csv when enabled.
template <typename Fn>
auto with_trajectory(TrackingSettings& s, const fs::path& dir, const std::string& name,
                     bool enabled, Fn run) {
  if (!enabled) return run();
  const std::string path = (dir / ("trajectory_" + name + ".csv")).string();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  sim::TrajectoryWriter writer(out);
  s.trajectory = &writer;
  auto result = run();
  s.trajectory = nullptr;
  if (!out.flush()) throw IoError("failed writing '" + path + "'");
  return result;
}

}  // namespace

double yaw_of(const sim::Quat& q) {
  return std::atan2(2.0 * (q.w * q.z + q.x * q.y), 1.0 - 2.0 * (q.y * q.y + q.z * q.z));
}

TrackingSettings tracking_settings(const RunConfig& config) {
  TrackingSettings s;
  s.env = config.env_config();
  s.env.randomization.enabled = false;
  s.env.obs_noise_std = 0.0;
  s.cap = config.tracking_cap;
  s.settle = config.tracking_settle;
  s.hold_time = config.hold_time;
  s.angular_rates = config.angular_rates;
  s.angular_timeout = config.angular_timeout;
  return s;
}

LinearResult linear_protocol(Actor& actor, const TrackingSettings& settings) {
  TrackingSettings s = settings;
  const int per_second = steps_per_second(s.env);
  const int stairs = static_cast<int>(std::ceil(s.cap - 1e-12));
  s.env.max_episode_time = s.settle + stairs + 1.0;
  env::Env e(s.env, std::make_shared<const sim::Terrain>(), 0);
  LinearResult result;
  if (!start_episode(e, actor, s)) {
    result.fell = true;
    return result;
  }
  const double dt = s.env.control_dt();
  for (int k = 0; k < stairs * per_second; ++k) {
    const double command = std::min(s.cap, 1.0 + k / per_second);
    e.set_command({command, 0.0, 0.0});
    const env::StepResult r = advance(e, actor, s, 0);
    const bool fell = r.done && r.info.outcome != env::ResetOutcome::kTimeout;
    result.rows.push_back({k * dt, command, e.state().base_linear_velocity.x(), fell});
    if (fell) {
      result.fell = true;
      break;
    }
  }
  return result;
}

AngularResult angular_protocol(Actor& actor, const TrackingSettings& settings) {
  TrackingSettings s = settings;
  s.env.max_episode_time = s.settle + s.angular_timeout + 1.0;
  env::Env e(s.env, std::make_shared<const sim::Terrain>(), 0);
  const double dt = s.env.control_dt();
  const int limit = steps_for(s.angular_timeout, s.env);
  AngularResult result;
  for (std::size_t g = 0; g < s.angular_rates.size(); ++g) {
    const double wz = s.angular_rates[g];
    AngularGroup group;
    group.group = static_cast<int>(g);
    group.command_vx = s.angular_linear_speed;
    group.command_wz = wz;
    if (!start_episode(e, actor, s, group.group)) {
      group.fell = true;
      result.groups.push_back(group);
      continue;
    }
    const double direction = wz > 0.0 ? 1.0 : -1.0;
    double previous_yaw = yaw_of(e.state().base_orientation);
    double heading = 0.0;
    for (int k = 0; k < limit; ++k) {
      e.set_command({s.angular_linear_speed, 0.0, wz});
      const env::StepResult r = advance(e, actor, s, group.group);
      const double yaw = yaw_of(e.state().base_orientation);
      const double before = heading;
      heading += std::remainder(yaw - previous_yaw, kTwoPi);
      previous_yaw = yaw;
      const double t = (k + 1) * dt;
      result.trace.push_back({group.group, t, heading, e.state().base_angular_velocity.z()});
      if (r.done && r.info.outcome != env::ResetOutcome::kTimeout) {
        group.fell = true;
        break;
      }
      if (direction * heading >= kTwoPi) {
        const double a = direction * before;
        const double b = direction * heading;
        group.time = t - dt + dt * (kTwoPi - a) / (b - a);
        group.mean_speed = kTwoPi / group.time;
        group.completed = true;
        break;
      }
    }
    if (!group.completed) {
      group.time = std::nan("");
      group.mean_speed = std::nan("");
    }
    result.groups.push_back(group);
  }
  return result;
}

HoldResult hold_protocol(Actor& actor, const TrackingSettings& settings) {
  TrackingSettings s = settings;
  s.env.max_episode_time = s.settle + s.hold_time + 1.0;
  env::Env e(s.env, std::make_shared<const sim::Terrain>(), 0);
  HoldResult result;
  if (!start_episode(e, actor, s)) {
    result.fell = true;
    result.mean_planar_speed = std::nan("");
    return result;
  }
  const double dt = s.env.control_dt();
  double sum = 0.0;
  const int n = steps_for(s.hold_time, s.env);
  for (int k = 0; k < n; ++k) {
    e.set_command({0.0, 0.0, 0.0});
    const env::StepResult r = advance(e, actor, s, 0);
    const sim::Vec3& v = e.state().base_linear_velocity;
    const double speed = std::hypot(v.x(), v.y());
    const bool fell = r.done && r.info.outcome != env::ResetOutcome::kTimeout;
    result.rows.push_back({(k + 1) * dt, v.x(), v.y(), speed, fell});
    sum += speed;
    if (fell) {
      result.fell = true;
      break;
    }
  }
  result.mean_planar_speed = result.rows.empty() ? std::nan("") : sum / result.rows.size();
  return result;
}

nlohmann::json run_eval_tracking(const RunConfig& config, Actor& actor,
                                 std::string_view protocol, const std::string& out_dir,
                                 const Logger& log) {
  const bool all = protocol == "all";
  if (!all && protocol != "linear" && protocol != "angular" && protocol != "hold") {
    throw ConfigError("unknown tracking protocol '" + std::string(protocol) +
                      "' (linear, angular, hold, all)");
  }
  config.validate();
  TrackingSettings settings = tracking_settings(config);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  nlohmann::json summary = nlohmann::json::object();

  if (all || protocol == "linear") {
    const LinearResult r = with_trajectory(settings, dir, "linear", config.trajectory_dump, [&] {
      return linear_protocol(actor, settings);
    });
    CsvWriter csv((dir / "linear.csv").string(), kLinearHeader);
    double err = 0.0;
    for (const LinearRow& row : r.rows) {
      csv.row({format_number(row.t), format_number(row.command_vx), format_number(row.body_vx),
               flag(row.fell)});
      err += std::abs(row.command_vx - row.body_vx);
    }
    summary["linear"] = {{"steps", r.rows.size()},
                         {"fell", r.fell},
                         {"mean_abs_error", r.rows.empty() ? 0.0 : err / r.rows.size()}};
    if (log) log(r.fell ? "linear: robot fell, partial trace written" : "linear: done");
  }
  if (all || protocol == "angular") {
    const AngularResult r = with_trajectory(settings, dir, "angular", config.trajectory_dump, [&] {
      return angular_protocol(actor, settings);
    });
    CsvWriter csv((dir / "angular.csv").string(), kAngularHeader);
    nlohmann::json groups = nlohmann::json::array();
    for (const AngularGroup& g : r.groups) {
      csv.row({std::to_string(g.group), format_number(g.command_vx), format_number(g.command_wz),
               format_number(g.time), format_number(g.mean_speed), flag(g.completed),
               flag(g.fell)});
      groups.push_back({{"command_wz", g.command_wz},
                        {"completed", g.completed},
                        {"fell", g.fell},
                        {"mean_speed", g.completed ? nlohmann::json(g.mean_speed)
                                                   : nlohmann::json(nullptr)}});
      if (log) {
        char line[160];
        std::snprintf(line, sizeof(line), "angular group %d: w_cz %.3f -> %s", g.group,
                      g.command_wz,
                      g.completed ? (std::to_string(g.mean_speed) + " rad/s").c_str()
                                  : (g.fell ? "fell" : "timeout"));
        log(line);
      }
    }
    CsvWriter trace((dir / "angular_trace.csv").string(), kAngularTraceHeader);
    for (const AngularTraceRow& row : r.trace) {
      trace.row({std::to_string(row.group), format_number(row.t),
                 format_number(row.heading_change), format_number(row.body_wz)});
    }
    summary["angular"] = groups;
  }
  if (all || protocol == "hold") {
    const HoldResult r = with_trajectory(settings, dir, "hold", config.trajectory_dump, [&] {
      return hold_protocol(actor, settings);
    });
    CsvWriter csv((dir / "hold.csv").string(), kHoldHeader);
    for (const HoldRow& row : r.rows) {
      csv.row({format_number(row.t), format_number(row.body_vx), format_number(row.body_vy),
               format_number(row.planar_speed), flag(row.fell)});
    }
    summary["hold"] = {{"fell", r.fell},
                       {"mean_planar_speed", std::isfinite(r.mean_planar_speed)
                                                 ? nlohmann::json(r.mean_planar_speed)
                                                 : nlohmann::json(nullptr)}};
    if (log) log("hold: mean planar speed " + format_number(r.mean_planar_speed) + " m/s");
  }
  nn::write_json_file((dir / "tracking_summary.json").string(), summary);
  return summary;
}

}  // namespace quadloco::app
