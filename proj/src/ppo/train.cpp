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

#include "quadloco/ppo/train.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "quadloco/error.hpp"
#include "quadloco/nn/checkpoint.hpp"
#include "quadloco/ppo/collector.hpp"

namespace quadloco::ppo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string rng_state(const std::mt19937_64& rng) {
  std::ostringstream out;
  out << rng;
  return out.str();
}

std::mt19937_64 rng_from_state(const std::string& s) {
  std::mt19937_64 rng;
  std::istringstream in(s);
  in >> rng;
  if (!in) throw IoError("checkpoint: corrupt rng state");
  return rng;
}

json curriculum_to_json(const env::CurriculumState& c) {
  return {{"terrain_index", c.terrain_index},
          {"reward_ema", c.reward_ema},
          {"ema_initialized", c.ema_initialized},
          {"epochs_above", c.epochs_above}};
}

env::CurriculumState curriculum_from_json(const json& j) {
  env::CurriculumState c;
  c.terrain_index = j.at("terrain_index").get<int>();
  c.reward_ema = j.at("reward_ema").get<double>();
  c.ema_initialized = j.at("ema_initialized").get<bool>();
  c.epochs_above = j.at("epochs_above").get<int>();
  return c;
}

void write_atomically(const fs::path& path, const json& doc) {
  const fs::path tmp = path.string() + ".tmp";
  nn::write_json_file(tmp.string(), doc);
  fs::rename(tmp, path);
}

// Keeps the header and the rows of epochs before `start_epoch`.
void truncate_csv(const fs::path& path, int start_epoch) {
  if (!fs::exists(path)) return;
  std::ifstream in(path);
  std::string line;
  std::string kept;
  bool header = true;
  while (std::getline(in, line)) {
    if (header || (!line.empty() && std::stoi(line) < start_epoch)) {
      kept += line + "\n";
    }
    header = false;
  }
  in.close();
  std::ofstream(path, std::ios::trunc) << kept;
}

void append_line(const fs::path& path, const char* header, const std::string& row) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot append to '" + path.string() + "'");
  if (fresh) out << header << "\n";
  out << row << "\n";
}

std::shared_ptr<const sim::Terrain> terrain_for(const TrainOptions& o, int index) {
  return std::make_shared<const sim::Terrain>(sim::Terrain::generate(
      env::curriculum_terrain(index), o.terrain_seed + index, o.terrain));
}

}  // namespace

void TrainOptions::validate() const {
  env.validate();
  ppo.validate();
  if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
  if (num_envs < 1 || steps_per_env < 1) {
    throw ConfigError("train: num_envs and steps_per_env must be >= 1");
  }
  if (group_size < 1 || threads < 1) {
    throw ConfigError("train: group_size and threads must be >= 1");
  }
  if (initial_terrain < 0 || initial_terrain > env::kLastTerrainIndex) {
    throw ConfigError("train: initial terrain index out of range");
  }
  for (int h : hidden_layers) {
    if (h < 1) throw ConfigError("train: hidden layer sizes must be >= 1");
  }
  if (run_dir.empty()) throw ConfigError("train: run_dir is empty");
  if (checkpoint_every < 1) throw ConfigError("train: checkpoint_every must be >= 1");
  if (eval_every < 0 || eval_episodes < 1) {
    throw ConfigError("train: eval_every must be >= 0 and eval_episodes >= 1");
  }
}

std::string telemetry_row(const EpochRecord& r) {
  std::ostringstream out;
  out << r.epoch << ',' << r.steps << ',' << fmt(r.mean_reward) << ','
      << fmt(r.mean_episode_len) << ',' << r.terrain_index << ',' << r.left_count
      << ',' << r.right_count << ',' << fmt(r.ratio) << ',' << fmt(r.approx_kl)
      << ',' << fmt(r.lr);
  return out.str();
}

std::string checkpoint_name(int epochs_done) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "epoch_%06d.ckpt", epochs_done);
  return buf;
}

std::string latest_checkpoint(const std::string& run_dir) {
  if (!fs::is_directory(run_dir)) return {};
  std::string best;
  for (const auto& entry : fs::directory_iterator(run_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() == 17 && name.rfind("epoch_", 0) == 0 &&
        name.ends_with(".ckpt") && name > fs::path(best).filename().string()) {
      best = entry.path().string();
    }
  }
  return best;
}

nn::Policy make_policy(const TrainOptions& o, std::mt19937_64& rng) {
  std::vector<int> sizes{env::kObsDim};
  sizes.insert(sizes.end(), o.hidden_layers.begin(), o.hidden_layers.end());
  sizes.push_back(env::kActionDim);
  nn::Policy p;
  p.net = nn::DenseNet::orthogonal(sizes, rng, 1.0, 0.01);
  p.head = nn::GaussianHead(env::kActionDim, o.init_log_std);
  p.head.clamp();
  p.input_scale = env::default_input_scale();
  return p;
}

nn::ValueFunction make_value_function(const TrainOptions& o, std::mt19937_64& rng) {
  std::vector<int> sizes{env::kObsDim};
  sizes.insert(sizes.end(), o.hidden_layers.begin(), o.hidden_layers.end());
  sizes.push_back(1);
  nn::ValueFunction v;
  v.net = nn::DenseNet::orthogonal(sizes, rng, 1.0, 1.0);
  v.input_scale = env::default_input_scale();
  return v;
}

TrainResult train(const TrainOptions& o, const EpochCallback& on_epoch) {
  o.validate();
  const fs::path dir(o.run_dir);
  fs::create_directories(dir);

  std::mt19937_64 init_rng(o.seed);
  TrainResult result;
  nn::Policy& policy = result.policy;
  nn::ValueFunction value;
  Optimizers opt;
  env::CurriculumState curriculum;
  curriculum.terrain_index = o.initial_terrain;
  std::mt19937_64 update_rng(o.seed ^ 0x9e3779b97f4a7c15ULL);
  std::int64_t total_steps = 0;
  int start = 0;

  const std::string resume_from = o.resume ? latest_checkpoint(o.run_dir) : "";
  if (!resume_from.empty()) {
    const json doc = nn::read_json_file(resume_from);
    nn::PolicyCheckpoint pc = nn::policy_from_json(doc.at("policy"));
    policy = std::move(pc.policy);
    opt.policy = pc.adam.value_or(nn::AdamState{});
    value.net = nn::net_from_json(doc.at("value").at("net"));
    value.input_scale = nn::decode_vector(doc.at("value").at("input_scale").get<std::string>());
    opt.value = nn::adam_from_json(doc.at("value").at("adam"));
    opt.lr_scale = doc.at("lr_scale").get<double>();
    curriculum = curriculum_from_json(doc.at("curriculum"));
    update_rng = rng_from_state(doc.at("update_rng").get<std::string>());
    total_steps = doc.at("steps").get<std::int64_t>();
    start = doc.at("epoch").get<int>();
    result.last_checkpoint = resume_from;
  } else {
    policy = make_policy(o, init_rng);
    value = make_value_function(o, init_rng);
  }
  result.start_epoch = start;
  truncate_csv(dir / "telemetry.csv", start);
  truncate_csv(dir / "eval.csv", start);

  auto terrain = terrain_for(o, curriculum.terrain_index);
  // A resumed run gets fresh environments seeded from the resume epoch.
  Collector collector(o.env, terrain, o.num_envs,
                      o.seed + static_cast<std::uint64_t>(start) * 1000003ULL,
                      o.group_size, o.threads);

  for (int epoch = start; epoch < o.epochs; ++epoch) {
    RolloutBuffer buf = collector.collect(policy, value, o.steps_per_env);
    compute_gae(buf, o.ppo.gamma, o.ppo.gae_lambda, o.ppo.normalize_advantages,
                o.ppo.reward_floor);
    const UpdateStats stats = update(policy, value, opt, buf, o.ppo, epoch, update_rng);
    if (stats.aborted) {
      throw Error(ErrorCode::kRuntime,
                  "train: non-finite loss at epoch " + std::to_string(epoch));
    }
    const CollectStats& cs = collector.last_stats();
    total_steps += cs.steps;

    EpochRecord rec;
    rec.epoch = epoch;
    rec.steps = total_steps;
    rec.mean_reward = cs.mean_reward;
    rec.mean_episode_len = cs.mean_episode_len;
    rec.terrain_index = curriculum.terrain_index;
    const SymmetryCounts sym = symmetry_ratio(buf.sides);
    rec.left_count = sym.left;
    rec.right_count = sym.right;
    rec.ratio = sym.ratio;
    rec.approx_kl = stats.approx_kl;
    rec.lr = stats.lr;
    append_line(dir / "telemetry.csv", kTelemetryHeader, telemetry_row(rec));

    if (o.eval_every > 0 && ((epoch + 1) % o.eval_every == 0 || epoch + 1 == o.epochs)) {
      env::EnvConfig eval_cfg = o.env;
      eval_cfg.randomization.enabled = false;
      const CollectStats es =
          evaluate(policy, eval_cfg, terrain, o.eval_episodes, o.seed + 17);
      append_line(dir / "eval.csv", kEvalHeader,
                  std::to_string(epoch) + "," + fmt(es.mean_r_lv) + "," +
                      fmt(es.mean_reward) + "," + fmt(es.mean_episode_len) + "," +
                      std::to_string(es.falls));
    }

    const int previous_terrain = curriculum.terrain_index;
    curriculum = env::advance_curriculum(curriculum, cs.mean_reward, o.curriculum);
    if (curriculum.terrain_index != previous_terrain) {
      terrain = terrain_for(o, curriculum.terrain_index);
      collector.set_terrain(terrain);
    }

    result.records.push_back(rec);
    if (on_epoch) on_epoch(rec, stats);

    if ((epoch + 1) % o.checkpoint_every == 0 || epoch + 1 == o.epochs) {
      json doc;
      doc["format_version"] = nn::kCheckpointFormatVersion;
      doc["kind"] = "training_checkpoint";
      doc["epoch"] = epoch + 1;
      doc["steps"] = total_steps;
      doc["seed"] = o.seed;
      doc["config"] = o.config_echo;
      doc["policy"] = nn::policy_to_json(policy, &opt.policy);
      doc["value"] = {{"net", nn::net_to_json(value.net)},
                      {"input_scale", nn::encode_doubles(std::span<const double>(
                                          value.input_scale.data(),
                                          static_cast<std::size_t>(value.input_scale.size())))},
                      {"adam", nn::adam_to_json(opt.value)}};
      doc["lr_scale"] = opt.lr_scale;
      doc["curriculum"] = curriculum_to_json(curriculum);
      doc["update_rng"] = rng_state(update_rng);
      const fs::path path = dir / checkpoint_name(epoch + 1);
      write_atomically(path, doc);
      result.last_checkpoint = path.string();
    }
  }
  return result;
}

}  // namespace quadloco::ppo
