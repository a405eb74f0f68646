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

// The command pipelines behind the CLI verbs.

#ifndef QUADLOCO_APP_PIPELINES_HPP_
#define QUADLOCO_APP_PIPELINES_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "quadloco/app/run_config.hpp"
#include "quadloco/env/env.hpp"
#include "quadloco/mirror/mirror.hpp"
#include "quadloco/ppo/train.hpp"
#include "quadloco/sim/trajectory.hpp"

namespace quadloco::app {

using Logger = std::function<void(const std::string&)>;

// A possibly stateful controller: `reset` is called before every episode.
struct Actor {
  std::function<sim::JointVector(const env::Observation&)> act;
  std::function<void()> reset;
};

Actor policy_actor(nn::Policy policy);
Actor controller_actor(mirror::Controller controller);
// Loads a controller artifact, a policy document or a training checkpoint.
Actor load_actor(const std::string& path);

// ---------------------------------------------------------------------------
// train

struct TrainSummary {
  std::string run_dir;
  std::string last_checkpoint;
  std::vector<ppo::EpochRecord> records;
};

// Validates the configuration before anything is written, then creates the
// run directory, freezes the resolved configuration to config.txt and trains.
TrainSummary run_train(const RunConfig& config, const Logger& log = {});

// ---------------------------------------------------------------------------
// eval-tracking

inline constexpr const char* kLinearHeader = "t,command_vx,body_vx,fell";
inline constexpr const char* kAngularHeader =
    "group,command_vx,command_wz,time_s,mean_speed,completed,fell";
inline constexpr const char* kAngularTraceHeader = "group,t,heading_change,body_wz";
inline constexpr const char* kHoldHeader = "t,body_vx,body_vy,planar_speed,fell";

struct TrackingSettings {
  env::EnvConfig env;  // flat terrain, no randomization, no noise
  double cap = 3.0;
  double settle = 1.0;
  double hold_time = 5.0;
  double angular_linear_speed = 1.0;
  std::vector<double> angular_rates;
  double angular_timeout = 30.0;
  // Receives every control step, settling included. Segments number the
  // episodes of one protocol.
  sim::TrajectoryWriter* trajectory = nullptr;
};

TrackingSettings tracking_settings(const RunConfig& config);

struct LinearRow {
  double t = 0.0;  // start of the control step, from the first command
  double command_vx = 0.0;
  double body_vx = 0.0;  // at the end of the step
  bool fell = false;
};

struct AngularTraceRow {
  int group = 0;
  double t = 0.0;  // end of the control step
  double heading_change = 0.0;  // unwrapped yaw minus the yaw at the first command
  double body_wz = 0.0;
};

struct AngularGroup {
  int group = 0;
  double command_vx = 0.0;
  double command_wz = 0.0;
  double time = 0.0;        // s to turn 2 pi in the commanded direction
  double mean_speed = 0.0;  // 2 pi / time
  bool completed = false;
  bool fell = false;
};

struct HoldRow {
  double t = 0.0;
  double body_vx = 0.0;
  double body_vy = 0.0;
  double planar_speed = 0.0;
  bool fell = false;
};

struct LinearResult {
  std::vector<LinearRow> rows;
  bool fell = false;
};

struct AngularResult {
  std::vector<AngularGroup> groups;
  std::vector<AngularTraceRow> trace;
};

struct HoldResult {
  std::vector<HoldRow> rows;
  double mean_planar_speed = 0.0;
  bool fell = false;
};

// Command 1 m/s from rest, raised by 1 m/s at every 1 s boundary until it
// reaches the cap; runs until one second after the last raise.
LinearResult linear_protocol(Actor& actor, const TrackingSettings& settings);
// One group per angular rate with linear command angular_linear_speed. The
// crossing time is interpolated linearly within the control step.
AngularResult angular_protocol(Actor& actor, const TrackingSettings& settings);
// Zero command for hold_time; reports the mean body-frame planar speed.
HoldResult hold_protocol(Actor& actor, const TrackingSettings& settings);

// Heading of a body orientation about the world z axis.
double yaw_of(const sim::Quat& q);

// Runs "linear", "angular", "hold" or "all" and writes the CSVs and a
// tracking_summary.json into out_dir. Returns the summary.
nlohmann::json run_eval_tracking(const RunConfig& config, Actor& actor,
                                 std::string_view protocol, const std::string& out_dir,
                                 const Logger& log = {});

// ---------------------------------------------------------------------------
// impact-test

struct ImpactOutcome {
  mirror::ImpactTestResult result;
  std::string report_path;
  std::string controller_path;  // empty when inconclusive
};

// Writes impact_report.json and, when decisive, controller.json to out_dir.
// Throws Error(kInconclusive) after writing the report otherwise.
ImpactOutcome run_impact_test(const RunConfig& config, const nn::Policy& policy,
                              const std::string& out_dir, const Logger& log = {});

// ---------------------------------------------------------------------------
// symmetry-report

struct TInterval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

// Two-sided Student-t interval of the mean; needs at least two samples.
// Non-finite samples make every bound nan.
TInterval t_interval(std::span<const double> samples, double level = 0.95);

struct SymmetryCurve {
  std::vector<std::uint64_t> seeds;
  std::vector<int> epochs;
  std::vector<std::vector<double>> ratios;  // [seed][epoch]
  std::vector<TInterval> ci;                // per epoch; nan with fewer than 2 seeds
};

// Aligns per-seed ratio series on the shortest one.
SymmetryCurve aggregate_ratios(const std::vector<std::uint64_t>& seeds,
                               const std::vector<std::vector<double>>& ratios);

// Largest |ratio - 1| over the series.
double max_ratio_deviation(std::span<const double> ratios);

void write_symmetry_csv(const std::string& path, const SymmetryCurve& curve);

struct SymmetryReport {
  SymmetryCurve without_randomization;
  SymmetryCurve with_randomization;
  std::vector<std::string> failures;
  nlohmann::json summary;
};

// Trains every seed with and without domain randomization under out_dir and
// writes symmetry_no_dr.csv, symmetry_dr.csv, symmetry.svg and
// symmetry_summary.json. Failed runs are skipped with a warning; the report
// needs at least one completed run per condition.
SymmetryReport run_symmetry_report(const RunConfig& config,
                                   const std::vector<std::uint64_t>& seeds,
                                   const std::string& out_dir, const Logger& log = {});

// ---------------------------------------------------------------------------
// export-plots

struct ExportResult {
  std::vector<std::string> written;
  std::vector<std::string> missing;
};

// Renders every known CSV in run_dir to SVG next to it.
ExportResult export_plots(const std::string& run_dir, const Logger& log = {});

}  // namespace quadloco::app

#endif  // QUADLOCO_APP_PIPELINES_HPP_
