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

#ifndef QUADLOCO_MIRROR_MIRROR_HPP_
#define QUADLOCO_MIRROR_MIRROR_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "quadloco/env/env.hpp"
#include "quadloco/mirror/signed_permutation.hpp"
#include "quadloco/nn/policy.hpp"

namespace quadloco::mirror {

// Deterministic action of a policy: the mean of its Gaussian head.
using ActionFn = std::function<sim::JointVector(const env::Observation&)>;

// M_a policy(M_s obs). Throws ShapeError on a dimension mismatch.
Eigen::VectorXd mirror_eval(const nn::Policy& policy, const MirrorMaps& maps,
                            const Eigen::Ref<const Eigen::VectorXd>& obs);

// Network computing exactly x -> M_a net(M_s x): input columns and output
// rows of the original weights are permuted and signed.
nn::DenseNet mirrored_net(const nn::DenseNet& net, const MirrorMaps& maps);

// Equivariant network x -> (net(x) + M_a net(M_s x)) / 2, built by stacking
// net and its mirror side by side with block-diagonal hidden layers.
nn::DenseNet symmetrized_net(const nn::DenseNet& net, const MirrorMaps& maps);

// ---------------------------------------------------------------------------
// Impact test.

struct ImpactTestConfig {
  int total_tests = 30;
  double push_interval = 2.0;  // s, settle time before the push and watch time after
  double initial_vmax = 1.0;   // m/s
  int max_iterations = 8;
  std::uint64_t seed = 1;
};

enum class ImpactDecision { kLeftAdvantage, kRightAdvantage, kHalve, kGrow };

std::string_view impact_decision_name(ImpactDecision d);

// Step 3 of the procedure: more right falls means left advantage; equal
// nonzero counts halve V_max, equal zero counts grow it by 1.5.
ImpactDecision impact_decision(int fall_to_right, int fall_to_left);
double next_vmax(ImpactDecision d, double vmax);

struct ImpactTrial {
  int iteration = 0;
  int index = 0;        // testcounter
  double v_max = 0.0;
  double push_vy = 0.0;  // body-frame lateral speed set by the push
  bool fell = false;
};

struct ImpactIteration {
  int iteration = 0;
  double v_max = 0.0;
  int fall_to_left = 0;
  int fall_to_right = 0;
  ImpactDecision decision = ImpactDecision::kGrow;
};

struct ImpactTestResult {
  int fall_to_left = 0;   // of the deciding (or last) iteration
  int fall_to_right = 0;
  bool left_advantage = false;
  bool decisive = false;  // false: iteration cap hit, result inconclusive
  double final_vmax = 0.0;
  std::vector<ImpactTrial> trials;
  std::vector<ImpactIteration> iterations;
};

// Trial k pushes to the right (V_y < 0) when k is even and to the left when
// it is odd. Trials 2p and 2p+1 share one magnitude drawn from (0, V_max),
// so an equivariant policy sees exactly mirrored trial pairs. Each trial
// starts from the standing state with zero command, settles for
// push_interval, is pushed, and is watched for another push_interval; body
// contact at any time counts as a fall.
ImpactTestResult impact_test(const ActionFn& policy, const env::EnvConfig& flat_env,
                             const ImpactTestConfig& config);

// One pass of total_tests trials at a fixed V_max; used by impact_test.
ImpactIteration impact_iteration(const ActionFn& policy, const env::EnvConfig& flat_env,
                                 const ImpactTestConfig& config, int iteration,
                                 double v_max, std::mt19937_64& rng,
                                 std::vector<ImpactTrial>* trials);

nlohmann::json impact_report_json(const ImpactTestResult& result);

// ---------------------------------------------------------------------------
// Network selector and composed controller.

enum class AdvantageSide { kLeft, kRight };
enum class Selection { kBase, kMirror };

std::string_view advantage_side_name(AdvantageSide side);
AdvantageSide parse_advantage_side(std::string_view name);

struct SelectorConfig {
  double delta = 0.05;  // rad, hysteresis half-width
  AdvantageSide side = AdvantageSide::kLeft;
};

// Left advantage: base when roll < -delta, mirror when roll > delta, the
// current selection inside the band. Right advantage swaps the two.
Selection select_network(const SelectorConfig& config, Selection current, double roll);

class Controller {
 public:
  Controller(nn::Policy policy, MirrorMaps maps, SelectorConfig selector);

  // Routes the observation through the selected network; stateful because
  // of the hysteresis memory.
  sim::JointVector act(const env::Observation& obs);
  void reset() { current_ = Selection::kBase; }

  Selection selection() const { return current_; }
  const nn::Policy& policy() const { return policy_; }
  const MirrorMaps& maps() const { return maps_; }
  const SelectorConfig& selector() const { return selector_; }

 private:
  nn::Policy policy_;
  MirrorMaps maps_;
  SelectorConfig selector_;
  Selection current_ = Selection::kBase;
};

// Throws Error(kInconclusive) for an undecided impact test.
Controller compose_controller(const nn::Policy& policy, const ImpactTestResult& result,
                              double hysteresis_delta = 0.05);

nlohmann::json controller_to_json(const Controller& controller);
Controller controller_from_json(const nlohmann::json& doc);
void save_controller(const std::string& path, const Controller& controller);
Controller load_controller(const std::string& path);

}  // namespace quadloco::mirror

#endif  // QUADLOCO_MIRROR_MIRROR_HPP_
