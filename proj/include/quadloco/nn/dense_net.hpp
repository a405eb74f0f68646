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

// Fully connected network with ELU hidden layers and a linear output layer.
//
// All parameters live in one flat vector so that the optimizer, checkpoint
// code and gradient checks can treat them uniformly. Layer l occupies
// [W_l (out x in, column-major), b_l (out)] in that order.

#ifndef QUADLOCO_NN_DENSE_NET_HPP_
#define QUADLOCO_NN_DENSE_NET_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace quadloco::nn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline double elu(double x) { return x > 0.0 ? x : std::exp(x) - 1.0; }

// d/dx elu(x); the left limit at 0 is exp(0) = 1, so the derivative is
// continuous.
inline double elu_derivative(double x) { return x > 0.0 ? 1.0 : std::exp(x); }

// Default policy architecture: 48 -> 512 -> 256 -> 128 -> 12.
std::vector<int> default_policy_layers();

class DenseNet {
 public:
  // Activations recorded by forward_batch for a later backward pass.
  struct Tape {
    Matrix input;
    std::vector<Matrix> pre;   // pre-activation of every layer
    std::vector<Matrix> post;  // post-activation of every hidden layer
  };

  struct Gradients {
    Vector params;  // same layout as parameters(), summed over the batch
    Matrix input;   // d(upstream . output)/d(input), one column per sample
  };

  DenseNet() = default;

  // Zero-initialized network. Throws ShapeError on an invalid layout.
  explicit DenseNet(std::vector<int> layer_sizes);

  // Orthogonal initialization: hidden layers scaled by hidden_gain, the output
  // layer by output_gain, biases zero.
  static DenseNet orthogonal(std::vector<int> layer_sizes, std::mt19937_64& rng,
                             double hidden_gain = 1.0,
                             double output_gain = 0.01);

  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  int num_layers() const { return static_cast<int>(layer_sizes_.size()) - 1; }
  int input_size() const { return layer_sizes_.front(); }
  int output_size() const { return layer_sizes_.back(); }
  Eigen::Index num_parameters() const { return params_.size(); }

  Vector& parameters() { return params_; }
  const Vector& parameters() const { return params_; }

  Eigen::Map<Matrix> weight(int layer);
  Eigen::Map<const Matrix> weight(int layer) const;
  Eigen::Map<Vector> bias(int layer);
  Eigen::Map<const Vector> bias(int layer) const;

  Vector forward(const Eigen::Ref<const Vector>& x) const;

  // Columns are samples.
  Matrix forward_batch(const Eigen::Ref<const Matrix>& x) const;
  Matrix forward_batch(const Eigen::Ref<const Matrix>& x, Tape& tape) const;

  // Reverse-mode gradients of sum_k upstream.col(k) . output.col(k).
  Gradients backward(const Tape& tape,
                     const Eigen::Ref<const Matrix>& upstream) const;

  // Single-sample convenience wrapper around forward_batch/backward.
  Gradients backward(const Eigen::Ref<const Vector>& x,
                     const Eigen::Ref<const Vector>& upstream) const;

  friend bool operator==(const DenseNet& a, const DenseNet& b) {
    return a.layer_sizes_ == b.layer_sizes_ &&
           a.params_.size() == b.params_.size() &&
           (a.params_.array() == b.params_.array()).all();
  }

 private:
  std::vector<int> layer_sizes_;
  std::vector<Eigen::Index> offsets_;  // start of W_l in params_
  Vector params_;
};

}  // namespace quadloco::nn

#endif  // QUADLOCO_NN_DENSE_NET_HPP_
