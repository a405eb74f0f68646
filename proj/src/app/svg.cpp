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

#include "quadloco/app/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "quadloco/error.hpp"

namespace quadloco::app {

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    } else if (lo == hi) {
      lo -= 1.0;
      hi += 1.0;
    } else {
      const double pad = 0.05 * (hi - lo);
      lo -= pad;
      hi += pad;
    }
  }
};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

}  // namespace

std::string render_plot(const PlotSpec& spec) {
  Range xr, yr;
  for (const Series& s : spec.series) {
    if (s.x.size() != s.y.size()) throw ShapeError("plot: series x/y length mismatch");
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  for (const Band& b : spec.bands) {
    if (b.x.size() != b.lo.size() || b.x.size() != b.hi.size()) {
      throw ShapeError("plot: band length mismatch");
    }
    for (double v : b.x) xr.add(v);
    for (double v : b.lo) yr.add(v);
    for (double v : b.hi) yr.add(v);
  }
  if (spec.reference_y) yr.add(*spec.reference_y);
  xr.finish();
  yr.finish();

  const double w = spec.width - kPlotLeft - kPlotRight;
  const double h = spec.height - kPlotTop - kPlotBottom;
  auto px = [&](double x) { return kPlotLeft + (x - xr.lo) / (xr.hi - xr.lo) * w; };
  auto py = [&](double y) { return kPlotTop + (yr.hi - y) / (yr.hi - yr.lo) * h; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
         std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(spec.width / 2.0) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         escape(spec.title) + "</text>\n";

  // Axes and ticks.
  svg += "<g class=\"axes\" stroke=\"#333\" fill=\"none\">\n";
  svg += "<rect x=\"" + num(kPlotLeft) + "\" y=\"" + num(kPlotTop) + "\" width=\"" + num(w) +
         "\" height=\"" + num(h) + "\"/>\n";
  svg += "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double yv = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    svg += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(kPlotTop + h + 16) +
           "\" text-anchor=\"middle\">" + tick_label(xv) + "</text>\n";
    svg += "<text x=\"" + num(kPlotLeft - 6) + "\" y=\"" + num(py(yv) + 4) +
           "\" text-anchor=\"end\">" + tick_label(yv) + "</text>\n";
  }
  svg += "<text x=\"" + num(kPlotLeft + w / 2) + "\" y=\"" + num(spec.height - 10.0) +
         "\" text-anchor=\"middle\">" + escape(spec.x_label) + "</text>\n";
  svg += "<text transform=\"translate(16," + num(kPlotTop + h / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(spec.y_label) + "</text>\n";
  svg += "</g>\n";

  for (const Band& b : spec.bands) {
    // One polygon per run of finite points.
    std::size_t i = 0;
    while (i < b.x.size()) {
      while (i < b.x.size() &&
             !(std::isfinite(b.x[i]) && std::isfinite(b.lo[i]) && std::isfinite(b.hi[i]))) {
        ++i;
      }
      std::size_t j = i;
      while (j < b.x.size() &&
             std::isfinite(b.x[j]) && std::isfinite(b.lo[j]) && std::isfinite(b.hi[j])) {
        ++j;
      }
      if (j > i) {
        std::string pts;
        for (std::size_t k = i; k < j; ++k) pts += num(px(b.x[k])) + "," + num(py(b.hi[k])) + " ";
        for (std::size_t k = j; k-- > i;) pts += num(px(b.x[k])) + "," + num(py(b.lo[k])) + " ";
        pts.pop_back();
        svg += "<polygon class=\"band\" fill=\"" + b.color + "\" fill-opacity=\"" +
               num(b.opacity) + "\" stroke=\"none\" points=\"" + pts + "\"/>\n";
      }
      i = j;
    }
  }

  if (spec.reference_y) {
    svg += "<line class=\"reference\" x1=\"" + num(kPlotLeft) + "\" x2=\"" + num(kPlotLeft + w) +
           "\" y1=\"" + num(py(*spec.reference_y)) + "\" y2=\"" + num(py(*spec.reference_y)) +
           "\" stroke=\"#888\" stroke-dasharray=\"4 4\"/>\n";
  }

  for (const Series& s : spec.series) {
    std::string pts;
    auto flush = [&] {
      if (pts.empty()) return;
      pts.pop_back();
      svg += "<polyline class=\"series\" data-label=\"" + escape(s.label) +
             "\" fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"" +
             pts + "\"/>\n";
      pts.clear();
    };
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) {
        flush();
        continue;
      }
      if (s.step && !pts.empty() && k > 0) {
        pts += num(px(s.x[k])) + "," + num(py(s.y[k - 1])) + " ";
      }
      pts += num(px(s.x[k])) + "," + num(py(s.y[k])) + " ";
    }
    flush();
  }

  // Legend.
  double ly = kPlotTop + 14;
  for (const Series& s : spec.series) {
    svg += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"11\">"
           "<line x1=\"" + num(kPlotLeft + w - 130) + "\" x2=\"" + num(kPlotLeft + w - 110) +
           "\" y1=\"" + num(ly - 4) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + s.color +
           "\" stroke-width=\"2\"/><text x=\"" + num(kPlotLeft + w - 105) + "\" y=\"" + num(ly) +
           "\">" + escape(s.label) + "</text></g>\n";
    ly += 14;
  }
  svg += "</svg>\n";
  return svg;
}

void write_plot(const std::string& path, const PlotSpec& spec) {
  const std::string svg = render_plot(spec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << svg;
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace quadloco::app
