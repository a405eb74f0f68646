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

#include "quadloco/nn/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "quadloco/error.hpp"

namespace quadloco::nn {

namespace {

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int decode_char(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

template <typename T>
T required(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw IoError(std::string("checkpoint: missing field '") + key + "'");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("checkpoint: bad field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string base64_encode(std::span<const unsigned char> bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out.push_back(kAlphabet[(n >> 18) & 63]);
    out.push_back(kAlphabet[(n >> 12) & 63]);
    out.push_back(kAlphabet[(n >> 6) & 63]);
    out.push_back(kAlphabet[n & 63]);
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const std::uint32_t n = bytes[i] << 16;
    out.push_back(kAlphabet[(n >> 18) & 63]);
    out.push_back(kAlphabet[(n >> 12) & 63]);
    out += "==";
  } else if (rest == 2) {
    const std::uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out.push_back(kAlphabet[(n >> 18) & 63]);
    out.push_back(kAlphabet[(n >> 12) & 63]);
    out.push_back(kAlphabet[(n >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::vector<unsigned char> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw IoError("base64: length not a multiple of 4");
  std::vector<unsigned char> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    std::array<int, 4> v{};
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=' && i + 4 == text.size() && k >= 2) {
        v[k] = 0;
        ++pad;
        continue;
      }
      if (pad > 0) throw IoError("base64: data after padding");
      v[k] = decode_char(c);
      if (v[k] < 0) throw IoError("base64: invalid character");
    }
    const std::uint32_t n = (v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3];
    out.push_back(static_cast<unsigned char>((n >> 16) & 0xff));
    if (pad < 2) out.push_back(static_cast<unsigned char>((n >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<unsigned char>(n & 0xff));
  }
  return out;
}

std::string encode_doubles(std::span<const double> values) {
  std::vector<unsigned char> bytes;
  bytes.reserve(values.size() * 8);
  for (double v : values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      bytes.push_back(static_cast<unsigned char>((bits >> (8 * b)) & 0xff));
    }
  }
  return base64_encode(bytes);
}

std::vector<double> decode_doubles(std::string_view text) {
  const auto bytes = base64_decode(text);
  if (bytes.size() % 8 != 0) throw IoError("float64 blob has a partial value");
  std::vector<double> out(bytes.size() / 8);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) {
      bits |= static_cast<std::uint64_t>(bytes[8 * i + b]) << (8 * b);
    }
    out[i] = std::bit_cast<double>(bits);
  }
  return out;
}

Eigen::VectorXd decode_vector(std::string_view text) {
  const auto values = decode_doubles(text);
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

nlohmann::json net_to_json(const DenseNet& net) {
  nlohmann::json doc;
  doc["format_version"] = kCheckpointFormatVersion;
  doc["layer_sizes"] = net.layer_sizes();
  doc["activation"] = "elu";
  doc["output_activation"] = "linear";
  nlohmann::json layers = nlohmann::json::array();
  for (int l = 0; l < net.num_layers(); ++l) {
    const auto w = net.weight(l);
    const auto b = net.bias(l);
    layers.push_back({{"weight", encode_doubles({w.data(), static_cast<std::size_t>(w.size())})},
                      {"bias", encode_doubles({b.data(), static_cast<std::size_t>(b.size())})}});
  }
  doc["layers"] = std::move(layers);
  return doc;
}

DenseNet net_from_json(const nlohmann::json& doc) {
  const int version = required<int>(doc, "format_version");
  if (version != kCheckpointFormatVersion) {
    throw IoError("checkpoint: unsupported format_version " + std::to_string(version));
  }
  if (required<std::string>(doc, "activation") != "elu") {
    throw IoError("checkpoint: only ELU hidden activations are supported");
  }
  auto sizes = required<std::vector<int>>(doc, "layer_sizes");
  DenseNet net;
  try {
    net = DenseNet(sizes);
  } catch (const ShapeError& e) {
    throw IoError(std::string("checkpoint: ") + e.what());
  }
  if (!doc.contains("layers")) throw IoError("checkpoint: missing field 'layers'");
  const auto& layers = doc.at("layers");
  if (!layers.is_array() || static_cast<int>(layers.size()) != net.num_layers()) {
    throw IoError("checkpoint: layer count does not match layer_sizes");
  }
  for (int l = 0; l < net.num_layers(); ++l) {
    const auto w = decode_doubles(required<std::string>(layers[l], "weight"));
    const auto b = decode_doubles(required<std::string>(layers[l], "bias"));
    auto wm = net.weight(l);
    auto bm = net.bias(l);
    if (static_cast<Eigen::Index>(w.size()) != wm.size() ||
        static_cast<Eigen::Index>(b.size()) != bm.size()) {
      throw IoError("checkpoint: layer " + std::to_string(l) + " blob has wrong size");
    }
    std::copy(w.begin(), w.end(), wm.data());
    std::copy(b.begin(), b.end(), bm.data());
  }
  return net;
}

nlohmann::json adam_to_json(const AdamState& state) {
  return {{"step_count", state.step_count},
          {"beta1", state.beta1},
          {"beta2", state.beta2},
          {"epsilon", state.epsilon},
          {"first_moment",
           encode_doubles({state.first_moment.data(),
                           static_cast<std::size_t>(state.first_moment.size())})},
          {"second_moment",
           encode_doubles({state.second_moment.data(),
                           static_cast<std::size_t>(state.second_moment.size())})}};
}

AdamState adam_from_json(const nlohmann::json& doc) {
  AdamState s;
  s.step_count = required<std::int64_t>(doc, "step_count");
  s.beta1 = required<double>(doc, "beta1");
  s.beta2 = required<double>(doc, "beta2");
  s.epsilon = required<double>(doc, "epsilon");
  s.first_moment = decode_vector(required<std::string>(doc, "first_moment"));
  s.second_moment = decode_vector(required<std::string>(doc, "second_moment"));
  if (s.first_moment.size() != s.second_moment.size()) {
    throw IoError("checkpoint: adam moments differ in size");
  }
  return s;
}

nlohmann::json policy_to_json(const Policy& policy, const AdamState* adam) {
  nlohmann::json doc = net_to_json(policy.net);
  if (policy.head.dim() > 0) {
    doc["log_std"] = encode_doubles({policy.head.log_std().data(),
                                     static_cast<std::size_t>(policy.head.dim())});
  }
  if (policy.input_scale.size() > 0) {
    doc["input_scale"] =
        encode_doubles({policy.input_scale.data(),
                        static_cast<std::size_t>(policy.input_scale.size())});
  }
  if (adam != nullptr) doc["adam"] = adam_to_json(*adam);
  return doc;
}

PolicyCheckpoint policy_from_json(const nlohmann::json& doc) {
  PolicyCheckpoint ckpt;
  ckpt.policy.net = net_from_json(doc);
  if (doc.contains("log_std")) {
    ckpt.policy.head = GaussianHead(decode_vector(doc.at("log_std").get<std::string>()));
    if (ckpt.policy.head.dim() != ckpt.policy.net.output_size()) {
      throw IoError("checkpoint: log_std size does not match the output layer");
    }
  } else {
    ckpt.policy.head = GaussianHead(ckpt.policy.net.output_size());
  }
  if (doc.contains("input_scale")) {
    ckpt.policy.input_scale = decode_vector(doc.at("input_scale").get<std::string>());
    if (ckpt.policy.input_scale.size() != ckpt.policy.net.input_size()) {
      throw IoError("checkpoint: input_scale size does not match the input layer");
    }
  }
  if (doc.contains("adam")) ckpt.adam = adam_from_json(doc.at("adam"));
  return ckpt;
}

Policy load_policy(const std::string& path) {
  const auto doc = read_json_file(path);
  if (doc.contains("policy")) return policy_from_json(doc.at("policy")).policy;
  return policy_from_json(doc).policy;
}

void write_json_file(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc.dump(1) << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace quadloco::nn
