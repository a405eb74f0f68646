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

// quadloco command-line interface. Links only the C API.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "quadloco/quadloco.h"

namespace {

struct Globals {
  std::string config_path;
  std::string out_dir;
  std::int64_t seed = -1;
  int threads = 0;
};

void print_line(const char* message, void*) {
  std::printf("%s\n", message);
  std::fflush(stdout);
}

int report(ql_status status) {
  if (status != QL_OK) {
    std::fprintf(stderr, "error (%s): %s\n", ql_status_name(status), ql_last_error());
  }
  return ql_exit_code(status);
}

// Config file, then QUADLOCO_* environment variables, then command-line flags.
ql_status make_config(const Globals& g, ql_config** out) {
  ql_status s = g.config_path.empty() ? ql_config_new(out)
                                      : ql_config_load(g.config_path.c_str(), out);
  if (s != QL_OK) return s;
  if ((s = ql_config_apply_env(*out)) != QL_OK) return s;
  if (g.seed >= 0 && (s = ql_config_set(*out, "seed", std::to_string(g.seed).c_str())) != QL_OK) {
    return s;
  }
  if (!g.out_dir.empty() && (s = ql_config_set(*out, "out_dir", g.out_dir.c_str())) != QL_OK) {
    return s;
  }
  if (g.threads > 0 &&
      (s = ql_config_set(*out, "threads", std::to_string(g.threads).c_str())) != QL_OK) {
    return s;
  }
  return QL_OK;
}

std::string help_footer() {
  std::string text = "\nOutputs go to <out_dir>/<run_id> unless stated otherwise.\n";
  text += "Exit codes: 0 success, 2 config or input error, 3 training failure,\n"
          "4 inconclusive impact test.\n\n";
  text += "CSV schemas (header rows):\n";
  text += ql_csv_schemas();
  text += "\nConfig keys (key=value file; QUADLOCO_<KEY> environment overrides):\n";
  text += ql_config_reference();
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadruped locomotion training workbench", "quadloco"};
  app.require_subcommand(1);
  app.footer(help_footer());

  Globals g;
  app.add_option("--config", g.config_path, "key=value run configuration file")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "override the seed key")->check(CLI::NonNegativeNumber);
  app.add_option("--out", g.out_dir, "override the out_dir key");
  app.add_option("--threads", g.threads, "override the threads key")->check(CLI::PositiveNumber);

  auto* train = app.add_subcommand("train", "train a policy; writes telemetry.csv and checkpoints");
  train->fallthrough();

  std::string controller_path;
  std::string protocol = "all";
  auto* tracking = app.add_subcommand(
      "eval-tracking", "linear staircase, angular groups and zero-command hold evaluation");
  tracking->fallthrough();
  tracking->add_option("controller", controller_path,
                       "controller artifact, policy document or checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  tracking->add_option("--protocol", protocol, "linear, angular, hold or all")
      ->check(CLI::IsMember({"linear", "angular", "hold", "all"}));

  std::string policy_path;
  auto* impact = app.add_subcommand(
      "impact-test", "find the advantage side and compose the mirror controller");
  impact->fallthrough();
  impact->add_option("policy", policy_path, "policy document or checkpoint")->required();

  std::vector<std::uint64_t> seeds;
  auto* symmetry = app.add_subcommand(
      "symmetry-report", "train several seeds with and without domain randomization");
  symmetry->fallthrough();
  symmetry->add_option("--seeds", seeds, "seeds, default: the symmetry_seeds key")
      ->delimiter(',');

  std::string run_dir;
  auto* plots = app.add_subcommand("export-plots", "render the CSVs of a run directory as SVG");
  plots->fallthrough();
  plots->add_option("run_dir", run_dir, "directory holding the CSVs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (plots->parsed()) {
    std::size_t written = 0;
    const ql_status s = ql_export_plots(run_dir.c_str(), &written, print_line, nullptr);
    if (s == QL_OK && written == 0) std::printf("nothing to plot in %s\n", run_dir.c_str());
    return report(s);
  }

  ql_config* config = nullptr;
  ql_status s = make_config(g, &config);
  if (s == QL_OK) {
    if (train->parsed()) {
      s = ql_train(config, print_line, nullptr);
    } else if (tracking->parsed()) {
      s = ql_eval_tracking(config, controller_path.c_str(), protocol.c_str(), nullptr,
                           print_line, nullptr);
    } else if (impact->parsed()) {
      s = ql_impact_test(config, policy_path.c_str(), nullptr, print_line, nullptr);
    } else if (symmetry->parsed()) {
      s = ql_symmetry_report(config, seeds.empty() ? nullptr : seeds.data(), seeds.size(),
                             nullptr, print_line, nullptr);
    }
  }
  ql_config_free(config);
  return report(s);
}
