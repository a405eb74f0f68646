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

#include "quadloco/mirror/mirror.hpp"

#include <cmath>
#include <memory>

#include "quadloco/error.hpp"
#include "quadloco/nn/checkpoint.hpp"
#include "quadloco/sim/simulator.hpp"

namespace quadloco::mirror {

using nlohmann::json;

Eigen::VectorXd mirror_eval(const nn::Policy& policy, const MirrorMaps& maps,
                            const Eigen::Ref<const Eigen::VectorXd>& obs) {
  if (policy.net.input_size() != maps.state.size() ||
      policy.net.output_size() != maps.action.size()) {
    throw ShapeError("mirror_eval: maps do not match the policy dimensions");
  }
  return maps.action.apply(policy.mean(maps.state.apply(obs)));
}

nn::DenseNet mirrored_net(const nn::DenseNet& net, const MirrorMaps& maps) {
  if (net.input_size() != maps.state.size() || net.output_size() != maps.action.size()) {
    throw ShapeError("mirrored_net: maps do not match the network dimensions");
  }
  nn::DenseNet out = net;
  const SignedPermutation& ps = maps.state;
  const SignedPermutation& pa = maps.action;
  // W M_s: column perm[i] of W moves to column i, times sign[i].
  {
    auto w = out.weight(0);
    const auto w0 = net.weight(0);
    for (int i = 0; i < ps.size(); ++i) {
      w.col(ps.perm()[i]) = ps.signs()[i] * w0.col(i);
    }
  }
  // M_a W: row i becomes sign[i] times row perm[i].
  const int last = net.num_layers() - 1;
  const nn::Matrix wl = out.weight(last);
  const nn::Vector bl = out.bias(last);
  auto w = out.weight(last);
  auto b = out.bias(last);
  for (int i = 0; i < pa.size(); ++i) {
    w.row(i) = pa.signs()[i] * wl.row(pa.perm()[i]);
    b[i] = pa.signs()[i] * bl[pa.perm()[i]];
  }
  return out;
}

nn::DenseNet symmetrized_net(const nn::DenseNet& net, const MirrorMaps& maps) {
  const nn::DenseNet twin = mirrored_net(net, maps);
  const int layers = net.num_layers();
  if (layers == 1) {
    nn::DenseNet out = net;
    out.parameters() = 0.5 * (net.parameters() + twin.parameters());
    return out;
  }
  std::vector<int> sizes = net.layer_sizes();
  for (int l = 1; l < layers; ++l) sizes[l] *= 2;
  nn::DenseNet out(sizes);
  for (int l = 0; l < layers; ++l) {
    auto w = out.weight(l);
    auto b = out.bias(l);
    const auto wa = net.weight(l);
    const auto wb = twin.weight(l);
    const Eigen::Index r = wa.rows();
    const Eigen::Index c = wa.cols();
    if (l == 0) {
      w.topRows(r) = wa;
      w.bottomRows(r) = wb;
      b.head(r) = net.bias(l);
      b.tail(r) = twin.bias(l);
    } else if (l + 1 < layers) {
      w.topLeftCorner(r, c) = wa;
      w.bottomRightCorner(r, c) = wb;
      b.head(r) = net.bias(l);
      b.tail(r) = twin.bias(l);
    } else {
      w.leftCols(c) = 0.5 * wa;
      w.rightCols(c) = 0.5 * wb;
      b = 0.5 * (net.bias(l) + twin.bias(l));
    }
  }
  return out;
}

std::string_view impact_decision_name(ImpactDecision d) {
  switch (d) {
    case ImpactDecision::kLeftAdvantage: return "left_advantage";
    case ImpactDecision::kRightAdvantage: return "right_advantage";
    case ImpactDecision::kHalve: return "halve_vmax";
    case ImpactDecision::kGrow: return "grow_vmax";
  }
  return "unknown";
}

ImpactDecision impact_decision(int fall_to_right, int fall_to_left) {
  if (fall_to_right > fall_to_left) return ImpactDecision::kLeftAdvantage;
  if (fall_to_right < fall_to_left) return ImpactDecision::kRightAdvantage;
  return fall_to_right != 0 ? ImpactDecision::kHalve : ImpactDecision::kGrow;
}

double next_vmax(ImpactDecision d, double vmax) {
  switch (d) {
    case ImpactDecision::kHalve: return 0.5 * vmax;
    case ImpactDecision::kGrow: return 1.5 * vmax;
    default: return vmax;
  }
}

ImpactIteration impact_iteration(const ActionFn& policy, const env::EnvConfig& flat_env,
                                 const ImpactTestConfig& config, int iteration,
                                 double v_max, std::mt19937_64& rng,
                                 std::vector<ImpactTrial>* trials) {
  env::EnvConfig cfg = flat_env;
  cfg.randomization.enabled = false;
  cfg.obs_noise_std = 0.0;
  cfg.max_episode_time = 2.0 * config.push_interval + 1.0;
  auto terrain = std::make_shared<const sim::Terrain>();
  env::Env env(cfg, terrain, config.seed);
  const int phase_steps =
      static_cast<int>(std::lround(config.push_interval / cfg.control_dt()));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  ImpactIteration it;
  it.iteration = iteration;
  it.v_max = v_max;
  double magnitude = 0.0;
  for (int k = 0; k < config.total_tests; ++k) {
    if (k % 2 == 0) {
      double u = 0.0;
      while (u <= 0.0) u = unit(rng);  // open interval (0, 1)
      magnitude = u * v_max;
    }
    ImpactTrial trial;
    trial.iteration = iteration;
    trial.index = k;
    trial.v_max = v_max;
    trial.push_vy = k % 2 == 0 ? -magnitude : magnitude;

    env.reset_to(sim::standing_state(cfg.model, *terrain), env::Command{});
    auto run = [&](int steps) {
      for (int s = 0; s < steps; ++s) {
        const env::StepResult r = env.step(policy(env.observation()));
        if (r.done) return r.info.outcome == env::ResetOutcome::kFell;
      }
      return false;
    };
    trial.fell = run(phase_steps);
    if (!trial.fell) {
      sim::Vec3 v = env.state().base_linear_velocity;
      v.y() = trial.push_vy;
      env.set_body_velocity(v);
      trial.fell = run(phase_steps);
    }
    if (trial.fell) {
      if (k % 2 == 0) {
        ++it.fall_to_right;
      } else {
        ++it.fall_to_left;
      }
    }
    if (trials != nullptr) trials->push_back(trial);
  }
  it.decision = impact_decision(it.fall_to_right, it.fall_to_left);
  return it;
}

ImpactTestResult impact_test(const ActionFn& policy, const env::EnvConfig& flat_env,
                             const ImpactTestConfig& config) {
  if (config.total_tests < 2 || !(config.push_interval > 0.0) ||
      !(config.initial_vmax > 0.0) || config.max_iterations < 1) {
    throw ConfigError("impact test: invalid configuration");
  }
  std::mt19937_64 rng(config.seed);
  ImpactTestResult result;
  double vmax = config.initial_vmax;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    const ImpactIteration it =
        impact_iteration(policy, flat_env, config, iter, vmax, rng, &result.trials);
    result.iterations.push_back(it);
    result.fall_to_left = it.fall_to_left;
    result.fall_to_right = it.fall_to_right;
    result.final_vmax = vmax;
    if (it.decision == ImpactDecision::kLeftAdvantage ||
        it.decision == ImpactDecision::kRightAdvantage) {
      result.decisive = true;
      result.left_advantage = it.decision == ImpactDecision::kLeftAdvantage;
      return result;
    }
    vmax = next_vmax(it.decision, vmax);
  }
  result.final_vmax = vmax;
  return result;
}

json impact_report_json(const ImpactTestResult& r) {
  json trials = json::array();
  for (const ImpactTrial& t : r.trials) {
    trials.push_back({{"iteration", t.iteration},
                      {"index", t.index},
                      {"v_max", t.v_max},
                      {"push_vy", t.push_vy},
                      {"side", t.push_vy < 0.0 ? "right" : "left"},
                      {"fell", t.fell}});
  }
  json iterations = json::array();
  for (const ImpactIteration& it : r.iterations) {
    iterations.push_back({{"iteration", it.iteration},
                          {"v_max", it.v_max},
                          {"falltoleft", it.fall_to_left},
                          {"falltoright", it.fall_to_right},
                          {"decision", impact_decision_name(it.decision)}});
  }
  json doc;
  doc["trials"] = std::move(trials);
  doc["iterations"] = std::move(iterations);
  doc["falltoleft"] = r.fall_to_left;
  doc["falltoright"] = r.fall_to_right;
  doc["decisive"] = r.decisive;
  if (r.decisive) {
    doc["leftadvantage"] = r.left_advantage;
  } else {
    doc["leftadvantage"] = nullptr;
  }
  doc["final_vmax"] = r.final_vmax;
  return doc;
}

std::string_view advantage_side_name(AdvantageSide side) {
  return side == AdvantageSide::kLeft ? "left" : "right";
}

AdvantageSide parse_advantage_side(std::string_view name) {
  if (name == "left") return AdvantageSide::kLeft;
  if (name == "right") return AdvantageSide::kRight;
  throw ConfigError("unknown advantage side '" + std::string(name) + "'");
}

Selection select_network(const SelectorConfig& config, Selection current, double roll) {
  const Selection below =
      config.side == AdvantageSide::kLeft ? Selection::kBase : Selection::kMirror;
  const Selection above =
      config.side == AdvantageSide::kLeft ? Selection::kMirror : Selection::kBase;
  if (roll < -config.delta) return below;
  if (roll > config.delta) return above;
  return current;
}

Controller::Controller(nn::Policy policy, MirrorMaps maps, SelectorConfig selector)
    : policy_(std::move(policy)), maps_(std::move(maps)), selector_(selector) {
  if (policy_.net.input_size() != maps_.state.size() ||
      policy_.net.output_size() != maps_.action.size()) {
    throw ShapeError("controller: maps do not match the policy dimensions");
  }
  if (!maps_.state.is_involution() || !maps_.action.is_involution()) {
    throw ConfigError("controller: mirror maps must be involutions");
  }
  if (!(selector_.delta >= 0.0)) throw ConfigError("controller: delta must be >= 0");
}

sim::JointVector Controller::act(const env::Observation& obs) {
  const double roll = env::roll_from_attitude(obs[env::kObsAttitude + 1],
                                              obs[env::kObsAttitude + 2]);
  current_ = select_network(selector_, current_, roll);
  if (current_ == Selection::kBase) return policy_.mean(obs);
  return mirror_eval(policy_, maps_, obs);
}

Controller compose_controller(const nn::Policy& policy, const ImpactTestResult& result,
                              double hysteresis_delta) {
  if (!result.decisive) {
    throw Error(ErrorCode::kInconclusive,
                "impact test was inconclusive; refusing to compose a controller");
  }
  SelectorConfig sel;
  sel.delta = hysteresis_delta;
  sel.side = result.left_advantage ? AdvantageSide::kLeft : AdvantageSide::kRight;
  return Controller(policy, build_mirror_maps(), sel);
}

namespace {

json map_to_json(const SignedPermutation& m) {
  return {{"perm", m.perm()}, {"signs", m.signs()}};
}

SignedPermutation map_from_json(const json& j) {
  return SignedPermutation(j.at("perm").get<std::vector<int>>(),
                           j.at("signs").get<std::vector<int>>());
}

}  // namespace

json controller_to_json(const Controller& c) {
  json doc = nn::policy_to_json(c.policy());
  doc["kind"] = "controller";
  doc["mirror_state_map"] = map_to_json(c.maps().state);
  doc["mirror_action_map"] = map_to_json(c.maps().action);
  doc["advantage_side"] = advantage_side_name(c.selector().side);
  doc["hysteresis_delta"] = c.selector().delta;
  return doc;
}

Controller controller_from_json(const json& doc) {
  try {
    nn::Policy policy = nn::policy_from_json(doc).policy;
    MirrorMaps maps{map_from_json(doc.at("mirror_state_map")),
                    map_from_json(doc.at("mirror_action_map"))};
    SelectorConfig sel;
    sel.side = parse_advantage_side(doc.at("advantage_side").get<std::string>());
    sel.delta = doc.at("hysteresis_delta").get<double>();
    return Controller(std::move(policy), std::move(maps), sel);
  } catch (const json::exception& e) {
    throw IoError(std::string("controller artifact: ") + e.what());
  }
}

void save_controller(const std::string& path, const Controller& controller) {
  nn::write_json_file(path, controller_to_json(controller));
}

Controller load_controller(const std::string& path) {
  return controller_from_json(nn::read_json_file(path));
}

}  // namespace quadloco::mirror
