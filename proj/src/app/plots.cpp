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

#include <algorithm>
#include <filesystem>

#include "quadloco/app/csv.hpp"
#include "quadloco/app/pipelines.hpp"
#include "quadloco/app/svg.hpp"
#include "quadloco/error.hpp"

namespace quadloco::app {

namespace fs = std::filesystem;

namespace {

struct PlotJob {
  const char* csv;
  const char* svg;
  const char* title;
  const char* x;
  std::vector<std::pair<const char*, const char*>> series;  // column, color
  const char* y_label;
  std::optional<double> reference_y;
};

const std::vector<PlotJob>& jobs() {
  static const std::vector<PlotJob> list{
      {"telemetry.csv", "reward.svg", "Mean reward per step", "epoch",
       {{"mean_reward", "#1f77b4"}}, "reward", std::nullopt},
      {"telemetry.csv", "episode_length.svg", "Mean episode length", "epoch",
       {{"mean_episode_len", "#2ca02c"}}, "control steps", std::nullopt},
      {"telemetry.csv", "symmetry_ratio.svg", "Left/right command sample ratio", "epoch",
       {{"ratio", "#d62728"}}, "left / right samples", 1.0},
      {"eval.csv", "eval_tracking.svg", "Evaluation tracking reward", "epoch",
       {{"mean_r_lv", "#9467bd"}}, "mean r_lv", std::nullopt},
      {"linear.csv", "tracking_linear.svg", "Linear velocity tracking", "t",
       {{"command_vx", "#7f7f7f"}, {"body_vx", "#1f77b4"}}, "m/s", std::nullopt},
      {"angular.csv", "tracking_angular.svg", "Heading rotation speed", "command_wz",
       {{"mean_speed", "#ff7f0e"}}, "rad/s", std::nullopt},
      {"hold.csv", "hold_speed.svg", "Zero-command planar speed", "t",
       {{"planar_speed", "#8c564b"}}, "m/s", std::nullopt},
  };
  return list;
}

}  // namespace

ExportResult export_plots(const std::string& run_dir, const Logger& log) {
  if (!fs::is_directory(run_dir)) {
    throw ConfigError("export-plots: '" + run_dir + "' is not a directory");
  }
  ExportResult result;
  std::vector<std::string> checked;
  for (const PlotJob& job : jobs()) {
    const fs::path csv_path = fs::path(run_dir) / job.csv;
    if (!fs::exists(csv_path)) {
      if (std::find(checked.begin(), checked.end(), job.csv) == checked.end()) {
        result.missing.push_back(job.csv);
        checked.push_back(job.csv);
        if (log) log(std::string("skipped: ") + job.csv + " not found");
      }
      continue;
    }
    const CsvTable table = read_csv(csv_path.string());
    PlotSpec spec;
    spec.title = job.title;
    spec.x_label = job.x;
    spec.y_label = job.y_label;
    spec.reference_y = job.reference_y;
    const std::vector<double> x = table.numbers(job.x);
    for (const auto& [column, color] : job.series) {
      spec.series.push_back({column, x, table.numbers(column), color});
    }
    const fs::path svg_path = fs::path(run_dir) / job.svg;
    write_plot(svg_path.string(), spec);
    result.written.push_back(svg_path.string());
    if (log) log("wrote " + svg_path.string());
  }
  return result;
}

}  // namespace quadloco::app
