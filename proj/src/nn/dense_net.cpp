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

#include "quadloco/nn/dense_net.hpp"

#include <string>
#include <utility>

#include "quadloco/error.hpp"

namespace quadloco::nn {

std::vector<int> default_policy_layers() { return {48, 512, 256, 128, 12}; }

DenseNet::DenseNet(std::vector<int> layer_sizes)
    : layer_sizes_(std::move(layer_sizes)) {
  if (layer_sizes_.size() < 2) {
    throw ShapeError("DenseNet needs at least an input and an output layer");
  }
  Eigen::Index total = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
    if (layer_sizes_[l] <= 0 || layer_sizes_[l + 1] <= 0) {
      throw ShapeError("DenseNet layer sizes must be positive");
    }
    offsets_.push_back(total);
    total += static_cast<Eigen::Index>(layer_sizes_[l + 1]) *
                 (layer_sizes_[l] + 1);
  }
  params_ = Vector::Zero(total);
}

DenseNet DenseNet::orthogonal(std::vector<int> layer_sizes,
                              std::mt19937_64& rng, double hidden_gain,
                              double output_gain) {
  DenseNet net(std::move(layer_sizes));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int l = 0; l < net.num_layers(); ++l) {
    auto w = net.weight(l);
    const Eigen::Index rows = w.rows();
    const Eigen::Index cols = w.cols();
    const Eigen::Index big = std::max(rows, cols);
    const Eigen::Index small = std::min(rows, cols);
    Matrix gauss(big, small);
    for (Eigen::Index j = 0; j < small; ++j) {
      for (Eigen::Index i = 0; i < big; ++i) gauss(i, j) = normal(rng);
    }
    Eigen::HouseholderQR<Matrix> qr(gauss);
    Matrix q = qr.householderQ() * Matrix::Identity(big, small);
    // Sign fix so the distribution is uniform over orthogonal matrices.
    const Matrix r = qr.matrixQR();
    for (Eigen::Index j = 0; j < small; ++j) {
      if (r(j, j) < 0.0) q.col(j) *= -1.0;
    }
    const double gain = (l + 1 == net.num_layers()) ? output_gain : hidden_gain;
    if (rows >= cols) {
      w = gain * q;
    } else {
      w = gain * q.transpose();
    }
  }
  return net;
}

Eigen::Map<Matrix> DenseNet::weight(int layer) {
  return {params_.data() + offsets_.at(layer), layer_sizes_[layer + 1],
          layer_sizes_[layer]};
}

Eigen::Map<const Matrix> DenseNet::weight(int layer) const {
  return {params_.data() + offsets_.at(layer), layer_sizes_[layer + 1],
          layer_sizes_[layer]};
}

Eigen::Map<Vector> DenseNet::bias(int layer) {
  const Eigen::Index rows = layer_sizes_[layer + 1];
  return {params_.data() + offsets_.at(layer) + rows * layer_sizes_[layer],
          rows};
}

Eigen::Map<const Vector> DenseNet::bias(int layer) const {
  const Eigen::Index rows = layer_sizes_[layer + 1];
  return {params_.data() + offsets_.at(layer) + rows * layer_sizes_[layer],
          rows};
}

Vector DenseNet::forward(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != input_size()) {
    throw ShapeError("forward: expected input of size " +
                     std::to_string(input_size()) + ", got " +
                     std::to_string(x.size()));
  }
  Vector h = x;
  for (int l = 0; l < num_layers(); ++l) {
    Vector z = weight(l) * h + bias(l);
    if (l + 1 < num_layers()) z = z.unaryExpr(&elu);
    h = std::move(z);
  }
  return h;
}

Matrix DenseNet::forward_batch(const Eigen::Ref<const Matrix>& x) const {
  if (x.rows() != input_size()) {
    throw ShapeError("forward_batch: expected " + std::to_string(input_size()) +
                     " input rows, got " + std::to_string(x.rows()));
  }
  Matrix h = x;
  for (int l = 0; l < num_layers(); ++l) {
    Matrix z = weight(l) * h;
    z.colwise() += bias(l);
    if (l + 1 < num_layers()) z = z.unaryExpr(&elu);
    h = std::move(z);
  }
  return h;
}

Matrix DenseNet::forward_batch(const Eigen::Ref<const Matrix>& x,
                               Tape& tape) const {
  if (x.rows() != input_size()) {
    throw ShapeError("forward_batch: expected " + std::to_string(input_size()) +
                     " input rows, got " + std::to_string(x.rows()));
  }
  tape.input = x;
  tape.pre.resize(num_layers());
  tape.post.resize(num_layers() - 1);
  for (int l = 0; l < num_layers(); ++l) {
    const Matrix& h = (l == 0) ? tape.input : tape.post[l - 1];
    tape.pre[l].noalias() = weight(l) * h;
    tape.pre[l].colwise() += bias(l);
    if (l + 1 < num_layers()) tape.post[l] = tape.pre[l].unaryExpr(&elu);
  }
  return tape.pre.back();
}

DenseNet::Gradients DenseNet::backward(
    const Tape& tape, const Eigen::Ref<const Matrix>& upstream) const {
  if (static_cast<int>(tape.pre.size()) != num_layers() ||
      upstream.rows() != output_size() ||
      upstream.cols() != tape.input.cols()) {
    throw ShapeError("backward: upstream gradient does not match the tape");
  }
  Gradients grads;
  grads.params = Vector::Zero(params_.size());
  Matrix delta = upstream;
  for (int l = num_layers() - 1; l >= 0; --l) {
    if (l + 1 < num_layers()) {
      delta.array() *= tape.pre[l].unaryExpr(&elu_derivative).array();
    }
    const Matrix& h = (l == 0) ? tape.input : tape.post[l - 1];
    const Eigen::Index rows = layer_sizes_[l + 1];
    const Eigen::Index cols = layer_sizes_[l];
    Eigen::Map<Matrix> dw(grads.params.data() + offsets_[l], rows, cols);
    Eigen::Map<Vector> db(grads.params.data() + offsets_[l] + rows * cols,
                          rows);
    dw.noalias() = delta * h.transpose();
    db = delta.rowwise().sum();
    Matrix next = weight(l).transpose() * delta;
    delta = std::move(next);
  }
  grads.input = std::move(delta);
  return grads;
}

DenseNet::Gradients DenseNet::backward(
    const Eigen::Ref<const Vector>& x,
    const Eigen::Ref<const Vector>& upstream) const {
  if (x.size() != input_size() || upstream.size() != output_size()) {
    throw ShapeError("backward: input or upstream size mismatch");
  }
  Tape tape;
  forward_batch(x, tape);
  return backward(tape, upstream);
}

}  // namespace quadloco::nn
