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

// Minimal standalone SVG line plots.

#ifndef QUADLOCO_APP_SVG_HPP_
#define QUADLOCO_APP_SVG_HPP_

#include <optional>
#include <string>
#include <vector>

namespace quadloco::app {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool step = false;  // draw as a staircase
};

// Filled region between lo and hi.
struct Band {
  std::vector<double> x;
  std::vector<double> lo;
  std::vector<double> hi;
  std::string color = "#1f77b4";
  double opacity = 0.2;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<Band> bands;
  std::optional<double> reference_y;  // dashed horizontal line
  int width = 640;
  int height = 400;
};

inline constexpr double kPlotLeft = 70.0;
inline constexpr double kPlotRight = 20.0;
inline constexpr double kPlotTop = 40.0;
inline constexpr double kPlotBottom = 50.0;

// Each series becomes one <polyline class="series"> per run of finite points,
// with points mapped affinely from data to pixel coordinates.
std::string render_plot(const PlotSpec& spec);
void write_plot(const std::string& path, const PlotSpec& spec);

}  // namespace quadloco::app

#endif  // QUADLOCO_APP_SVG_HPP_
