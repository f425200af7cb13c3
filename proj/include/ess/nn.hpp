// Copyright 2026 The ESS Games Authors.
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

#ifndef ESS_NN_HPP_
#define ESS_NN_HPP_

// Small dense networks with hand-written backpropagation.
//
// Activations are laid out column-major: a batch of inputs is a matrix with
// one column per example. Hidden layers use ReLU; the output layer is linear.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ess/rng.hpp"

namespace ess::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Arch { kLinear, kMlp2x300 };

inline constexpr int kHiddenWidth = 300;

Arch ParseArch(std::string_view name);  // "linear" | "mlp"
std::string ArchName(Arch arch);

// Parameter count as a pure function of the shape.
std::size_t ParamCount(Arch arch, int input_dim, int output_dim);

struct Dense {
  Matrix w;  // out x in
  Vector b;  // out
};

struct Gradients {
  std::vector<Matrix> dw;
  std::vector<Vector> db;
};

class Network {
 public:
  struct Cache {
    std::vector<Matrix> inputs;  // input of each layer
    std::vector<Matrix> pre;     // pre-activation of each layer
  };

  Network() = default;
  // He-uniform hidden layers, Glorot-uniform output layer, zero biases.
  Network(Arch arch, int input_dim, int output_dim, Rng& rng);
  // All parameters zero (an untrained network that is indifferent).
  static Network Zeros(Arch arch, int input_dim, int output_dim);
  static Network FromLayers(Arch arch, std::vector<Dense> layers);

  Arch arch() const { return arch_; }
  int input_dim() const { return static_cast<int>(layers_.front().w.cols()); }
  int output_dim() const { return static_cast<int>(layers_.back().w.rows()); }
  const std::vector<Dense>& layers() const { return layers_; }
  // Values may change in place; shapes must not.
  std::vector<Dense>& mutable_layers() { return layers_; }
  std::size_t num_params() const;

  Matrix Forward(const Matrix& x) const;
  Matrix Forward(const Matrix& x, Cache& cache) const;
  Vector Forward(const Vector& x) const;
  // d(loss)/d(params) given d(loss)/d(output) for the batch in `cache`.
  Gradients Backward(const Cache& cache, const Matrix& d_out) const;

  // Flat parameter view, layer by layer: w (column-major) then b.
  Vector Flatten() const;
  void Unflatten(const Vector& flat);

  bool AllFinite() const;

  bool operator==(const Network& other) const;

 private:
  Arch arch_ = Arch::kLinear;
  std::vector<Dense> layers_;
};

Vector FlattenGradients(const Gradients& g);

class Adam {
 public:
  explicit Adam(const Network& net, double learning_rate, double beta1 = 0.9,
                double beta2 = 0.999, double epsilon = 1e-8);
  void Step(Network& net, const Gradients& grads);

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  Gradients m_, v_;
};

// Mean Huber loss (delta 1) over the selected entries: for column j only row
// actions[j] is compared with targets[j]. Writes d(loss)/d(pred) if asked.
double MaskedHuberLoss(const Matrix& pred, const std::vector<int>& actions,
                       const Vector& targets, Matrix* d_pred);

// Mean softmax cross-entropy; labels[j] is the class of column j.
double SoftmaxCrossEntropy(const Matrix& logits, const std::vector<int>& labels,
                           Matrix* d_logits);

// Mean squared error of a 1-row prediction.
double MeanSquaredError(const Matrix& pred, const Vector& targets,
                        Matrix* d_pred);

Vector Softmax(const Vector& logits);
Matrix SoftmaxColumns(const Matrix& logits);

}  // namespace ess::nn

#endif  // ESS_NN_HPP_
