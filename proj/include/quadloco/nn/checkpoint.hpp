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

// JSON checkpoint documents.
//
//   {
//     "format_version": 1,
//     "layer_sizes": [48, 512, 256, 128, 12],
//     "activation": "elu",
//     "output_activation": "linear",
//     "layers": [{"weight": "<b64>", "bias": "<b64>"}, ...],
//     "log_std": "<b64>",          optional
//     "input_scale": "<b64>",      optional
//     "adam": {"step_count": n, "beta1": .., "beta2": .., "epsilon": ..,
//              "first_moment": "<b64>", "second_moment": "<b64>"}  optional
//   }
//
// Blobs are base64 of little-endian IEEE-754 float64 arrays (weights in
// column-major order), so load(save(x)) is bit-exact.

#ifndef QUADLOCO_NN_CHECKPOINT_HPP_
#define QUADLOCO_NN_CHECKPOINT_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "quadloco/nn/adam.hpp"
#include "quadloco/nn/dense_net.hpp"
#include "quadloco/nn/policy.hpp"

namespace quadloco::nn {

inline constexpr int kCheckpointFormatVersion = 1;

std::string base64_encode(std::span<const unsigned char> bytes);
std::vector<unsigned char> base64_decode(std::string_view text);

std::string encode_doubles(std::span<const double> values);
std::vector<double> decode_doubles(std::string_view text);
Eigen::VectorXd decode_vector(std::string_view text);

nlohmann::json net_to_json(const DenseNet& net);
DenseNet net_from_json(const nlohmann::json& doc);

nlohmann::json adam_to_json(const AdamState& state);
AdamState adam_from_json(const nlohmann::json& doc);

struct PolicyCheckpoint {
  Policy policy;
  std::optional<AdamState> adam;
};

nlohmann::json policy_to_json(const Policy& policy,
                              const AdamState* adam = nullptr);
PolicyCheckpoint policy_from_json(const nlohmann::json& doc);

// Accepts either a bare policy document or a training checkpoint with a
// "policy" member.
Policy load_policy(const std::string& path);

void write_json_file(const std::string& path, const nlohmann::json& doc);
nlohmann::json read_json_file(const std::string& path);

}  // namespace quadloco::nn

#endif  // QUADLOCO_NN_CHECKPOINT_HPP_
