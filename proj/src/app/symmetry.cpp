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
#include <cmath>
#include <filesystem>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "quadloco/app/csv.hpp"
#include "quadloco/app/pipelines.hpp"
#include "quadloco/app/svg.hpp"
#include "quadloco/error.hpp"
#include "quadloco/nn/checkpoint.hpp"

namespace quadloco::app {

namespace fs = std::filesystem;

namespace {

nlohmann::json json_number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json curve_summary(const SymmetryCurve& curve) {
  nlohmann::json per_seed = nlohmann::json::object();
  double sum = 0.0;
  int large = 0;
  for (std::size_t i = 0; i < curve.seeds.size(); ++i) {
    const double d = max_ratio_deviation(curve.ratios[i]);
    per_seed[std::to_string(curve.seeds[i])] = json_number(d);
    sum += d;
    if (d >= 0.2) ++large;
  }
  const double mean = curve.seeds.empty() ? std::nan("") : sum / curve.seeds.size();
  return {{"seeds", curve.seeds},
          {"epochs", curve.epochs.size()},
          {"max_deviation", per_seed},
          {"mean_max_deviation", json_number(mean)},
          {"mean_max_deviation_infinite", std::isinf(mean)},
          {"seeds_with_deviation_at_least_0.2", large}};
}

}  // namespace

TInterval t_interval(std::span<const double> samples, double level) {
  const std::size_t n = samples.size();
  if (n < 2) throw ContractError("t_interval needs at least two samples");
  if (!(level > 0.0 && level < 1.0)) throw ContractError("t_interval level must be in (0, 1)");
  double mean = 0.0;
  for (double v : samples) {
    if (!std::isfinite(v)) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return {nan, nan, nan};
    }
    mean += v;
  }
  mean /= n;
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  const double q = boost::math::quantile(boost::math::complement(dist, 0.5 * (1.0 - level)));
  const double half = q * sd / std::sqrt(static_cast<double>(n));
  return {mean, mean - half, mean + half};
}

SymmetryCurve aggregate_ratios(const std::vector<std::uint64_t>& seeds,
                               const std::vector<std::vector<double>>& ratios) {
  if (seeds.size() != ratios.size()) throw ShapeError("aggregate_ratios: seed count mismatch");
  SymmetryCurve curve;
  curve.seeds = seeds;
  std::size_t len = ratios.empty() ? 0 : std::numeric_limits<std::size_t>::max();
  for (const auto& r : ratios) len = std::min(len, r.size());
  for (const auto& r : ratios) curve.ratios.emplace_back(r.begin(), r.begin() + len);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t e = 0; e < len; ++e) {
    curve.epochs.push_back(static_cast<int>(e));
    std::vector<double> column;
    for (const auto& r : curve.ratios) column.push_back(r[e]);
    if (column.size() >= 2) {
      curve.ci.push_back(t_interval(column));
    } else {
      curve.ci.push_back({column[0], nan, nan});
    }
  }
  return curve;
}

double max_ratio_deviation(std::span<const double> ratios) {
  double m = 0.0;
  for (double r : ratios) {
    const double d = std::abs(r - 1.0);
    if (std::isnan(d)) continue;
    m = std::max(m, d);
  }
  return m;
}

void write_symmetry_csv(const std::string& path, const SymmetryCurve& curve) {
  std::vector<std::string> header{"epoch", "mean_ratio", "ci_low", "ci_high"};
  for (std::uint64_t s : curve.seeds) header.push_back("seed_" + std::to_string(s));
  CsvWriter csv(path, header);
  for (std::size_t e = 0; e < curve.epochs.size(); ++e) {
    std::vector<std::string> row{std::to_string(curve.epochs[e]), format_number(curve.ci[e].mean),
                                 format_number(curve.ci[e].low), format_number(curve.ci[e].high)};
    for (const auto& r : curve.ratios) row.push_back(format_number(r[e]));
    csv.row(row);
  }
}

SymmetryReport run_symmetry_report(const RunConfig& config,
                                   const std::vector<std::uint64_t>& seeds,
                                   const std::string& out_dir, const Logger& log) {
  if (seeds.size() < 2) throw ConfigError("symmetry report needs at least two seeds");
  config.validate_for_training();
  fs::create_directories(out_dir);

  SymmetryReport report;
  for (const bool randomized : {false, true}) {
    std::vector<std::uint64_t> done;
    std::vector<std::vector<double>> ratios;
    for (std::uint64_t seed : seeds) {
      RunConfig c = config;
      c.seed = seed;
      c.randomization = randomized;
      c.out_dir = out_dir;
      c.run_id = "seed" + std::to_string(seed) + (randomized ? "_dr" : "_no_dr");
      c.resume = false;
      if (log) log("training " + c.run_id);
      try {
        const TrainSummary s = run_train(c);
        std::vector<double> r;
        for (const auto& rec : s.records) r.push_back(rec.ratio);
        done.push_back(seed);
        ratios.push_back(std::move(r));
      } catch (const Error& e) {
        report.failures.push_back(c.run_id + ": " + e.what());
        if (log) log("warning: " + c.run_id + " failed: " + e.what());
      }
    }
    if (done.empty()) {
      throw Error(ErrorCode::kRuntime, std::string("symmetry report: every run ") +
                                           (randomized ? "with" : "without") +
                                           " randomization failed");
    }
    SymmetryCurve curve = aggregate_ratios(done, ratios);
    write_symmetry_csv((fs::path(out_dir) / (randomized ? "symmetry_dr.csv"
                                                        : "symmetry_no_dr.csv")).string(),
                       curve);
    (randomized ? report.with_randomization : report.without_randomization) = std::move(curve);
  }

  PlotSpec plot;
  plot.title = "Left/right command sample ratio";
  plot.x_label = "epoch";
  plot.y_label = "left / right samples";
  plot.reference_y = 1.0;
  const std::pair<const SymmetryCurve*, const char*> curves[] = {
      {&report.without_randomization, "#d62728"}, {&report.with_randomization, "#1f77b4"}};
  for (const auto& [curve, color] : curves) {
    std::vector<double> x, mean, lo, hi;
    for (std::size_t e = 0; e < curve->epochs.size(); ++e) {
      x.push_back(curve->epochs[e]);
      mean.push_back(curve->ci[e].mean);
      lo.push_back(curve->ci[e].low);
      hi.push_back(curve->ci[e].high);
    }
    plot.bands.push_back({x, lo, hi, color, 0.2});
    plot.series.push_back({curve == &report.without_randomization ? "without randomization"
                                                                  : "with randomization",
                           x, mean, color, false});
  }
  write_plot((fs::path(out_dir) / "symmetry.svg").string(), plot);

  report.summary = {{"without_randomization", curve_summary(report.without_randomization)},
                    {"with_randomization", curve_summary(report.with_randomization)},
                    {"failures", report.failures}};
  nn::write_json_file((fs::path(out_dir) / "symmetry_summary.json").string(), report.summary);
  return report;
}

}  // namespace quadloco::app
