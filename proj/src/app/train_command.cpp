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
#include <fstream>

#include "quadloco/app/pipelines.hpp"
#include "quadloco/error.hpp"
#include "quadloco/nn/checkpoint.hpp"

namespace quadloco::app {

namespace fs = std::filesystem;

namespace {

void check_env_shape(const nn::Policy& policy) {
  if (policy.net.input_size() != env::kObsDim || policy.net.output_size() != env::kActionDim) {
    throw ShapeError("policy must map " + std::to_string(env::kObsDim) + " inputs to " +
                     std::to_string(env::kActionDim) + " actions");
  }
}

}  // namespace

Actor policy_actor(nn::Policy policy) {
  check_env_shape(policy);
  auto shared = std::make_shared<const nn::Policy>(std::move(policy));
  return {[shared](const env::Observation& obs) -> sim::JointVector {
            return shared->mean(obs);
          },
          {}};
}

Actor controller_actor(mirror::Controller controller) {
  check_env_shape(controller.policy());
  auto shared = std::make_shared<mirror::Controller>(std::move(controller));
  return {[shared](const env::Observation& obs) { return shared->act(obs); },
          [shared] { shared->reset(); }};
}

Actor load_actor(const std::string& path) {
  const nlohmann::json doc = nn::read_json_file(path);
  if (doc.is_object() && doc.value("kind", std::string()) == "controller") {
    return controller_actor(mirror::controller_from_json(doc));
  }
  if (doc.is_object() && doc.contains("policy")) {
    return policy_actor(nn::policy_from_json(doc.at("policy")).policy);
  }
  return policy_actor(nn::policy_from_json(doc).policy);
}

TrainSummary run_train(const RunConfig& config, const Logger& log) {
  config.validate_for_training();
  const ppo::TrainOptions options = config.train_options();
  fs::create_directories(options.run_dir);
  {
    const fs::path frozen = fs::path(options.run_dir) / "config.txt";
    std::ofstream out(frozen, std::ios::binary | std::ios::trunc);
    out << config.to_text();
    if (!out) throw IoError("failed writing '" + frozen.string() + "'");
  }
  const int total = options.epochs;
  auto on_epoch = [&](const ppo::EpochRecord& r, const ppo::UpdateStats& s) {
    if (!log) return;
    char line[256];
    std::snprintf(line, sizeof(line),
                  "epoch %d/%d  reward %.4f  episode %.1f  terrain %d  ratio %.3f  kl %.4f%s",
                  r.epoch + 1, total, r.mean_reward, r.mean_episode_len, r.terrain_index,
                  r.ratio, r.approx_kl, s.early_stopped ? " (early stop)" : "");
    log(line);
  };
  ppo::TrainResult result = ppo::train(options, on_epoch);
  return {options.run_dir, result.last_checkpoint, std::move(result.records)};
}

}  // namespace quadloco::app
