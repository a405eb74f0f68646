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

#include <filesystem>

#include "quadloco/app/pipelines.hpp"
#include "quadloco/error.hpp"
#include "quadloco/nn/checkpoint.hpp"

namespace quadloco::app {

namespace fs = std::filesystem;

ImpactOutcome run_impact_test(const RunConfig& config, const nn::Policy& policy,
                              const std::string& out_dir, const Logger& log) {
  config.validate();
  if (policy.net.input_size() != env::kObsDim || policy.net.output_size() != env::kActionDim) {
    throw ShapeError("impact test: policy does not match the environment dimensions");
  }
  env::EnvConfig env_config = config.env_config();
  env_config.randomization.enabled = false;
  env_config.obs_noise_std = 0.0;
  const auto act = [&policy](const env::Observation& obs) -> sim::JointVector {
    return policy.mean(obs);
  };

  ImpactOutcome outcome;
  outcome.result = mirror::impact_test(act, env_config, config.impact_config());
  if (log) {
    for (const mirror::ImpactIteration& it : outcome.result.iterations) {
      char line[160];
      std::snprintf(line, sizeof(line),
                    "iteration %d: V_max %.4f  falls right %d  left %d  -> %s", it.iteration,
                    it.v_max, it.fall_to_right, it.fall_to_left,
                    std::string(mirror::impact_decision_name(it.decision)).c_str());
      log(line);
    }
  }

  fs::create_directories(out_dir);
  outcome.report_path = (fs::path(out_dir) / "impact_report.json").string();
  nn::write_json_file(outcome.report_path, mirror::impact_report_json(outcome.result));
  if (!outcome.result.decisive) {
    throw Error(ErrorCode::kInconclusive,
                "impact test inconclusive after " +
                    std::to_string(outcome.result.iterations.size()) +
                    " iterations; report written to " + outcome.report_path);
  }
  const mirror::Controller controller =
      mirror::compose_controller(policy, outcome.result, config.hysteresis_delta);
  outcome.controller_path = (fs::path(out_dir) / "controller.json").string();
  mirror::save_controller(outcome.controller_path, controller);
  if (log) {
    log(std::string("advantage side: ") +
        std::string(mirror::advantage_side_name(controller.selector().side)));
  }
  return outcome;
}

}  // namespace quadloco::app
