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

#include "ess/nn.hpp"

#include <cmath>

#include "ess/errors.hpp"

namespace ess::nn {

Arch ParseArch(std::string_view name) {
  if (name == "linear") return Arch::kLinear;
  if (name == "mlp" || name == "mlp2x300") return Arch::kMlp2x300;
  throw ConfigError("unknown architecture '" + std::string(name) + "'");
}

std::string ArchName(Arch arch) {
  return arch == Arch::kLinear ? "linear" : "mlp2x300";
}

namespace {

std::vector<int> Widths(Arch arch, int input_dim, int output_dim) {
  if (arch == Arch::kLinear) return {input_dim, output_dim};
  return {input_dim, kHiddenWidth, kHiddenWidth, output_dim};
}

}  // namespace

std::size_t ParamCount(Arch arch, int input_dim, int output_dim) {
  const auto w = Widths(arch, input_dim, output_dim);
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) n += w[i] * w[i + 1] + w[i + 1];
  return n;
}

Network::Network(Arch arch, int input_dim, int output_dim, Rng& rng)
    : arch_(arch) {
  if (input_dim < 1 || output_dim < 1) {
    throw ValidationError("network dimensions must be positive");
  }
  const auto widths = Widths(arch, input_dim, output_dim);
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    const int in = widths[i];
    const int out = widths[i + 1];
    const bool last = i + 2 == widths.size();
    const double limit =
        last ? std::sqrt(6.0 / (in + out)) : std::sqrt(6.0 / in);
    Dense layer{Matrix(out, in), Vector::Zero(out)};
    for (Eigen::Index c = 0; c < layer.w.cols(); ++c) {
      for (Eigen::Index r = 0; r < layer.w.rows(); ++r) {
        layer.w(r, c) = (2.0 * UniformUnit(rng) - 1.0) * limit;
      }
    }
    layers_.push_back(std::move(layer));
  }
}

Network Network::Zeros(Arch arch, int input_dim, int output_dim) {
  const auto widths = Widths(arch, input_dim, output_dim);
  std::vector<Dense> layers;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    layers.push_back(
        {Matrix::Zero(widths[i + 1], widths[i]), Vector::Zero(widths[i + 1])});
  }
  return FromLayers(arch, std::move(layers));
}

Network Network::FromLayers(Arch arch, std::vector<Dense> layers) {
  const std::size_t expected = arch == Arch::kLinear ? 1 : 3;
  if (layers.size() != expected) {
    throw ValidationError("layer count does not match architecture " +
                          ArchName(arch));
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (layers[i].b.size() != layers[i].w.rows() ||
        (i > 0 && layers[i].w.cols() != layers[i - 1].w.rows())) {
      throw ValidationError("inconsistent layer shapes");
    }
    if (arch == Arch::kMlp2x300 && i < 2 && layers[i].w.rows() != kHiddenWidth) {
      throw ValidationError("mlp2x300 hidden layers must have width 300");
    }
  }
  Network net;
  net.arch_ = arch;
  net.layers_ = std::move(layers);
  return net;
}

std::size_t Network::num_params() const {
  std::size_t n = 0;
  for (const Dense& d : layers_) n += d.w.size() + d.b.size();
  return n;
}

Matrix Network::Forward(const Matrix& x) const {
  Matrix h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Matrix z = layers_[i].w * h;
    z.colwise() += layers_[i].b;
    if (i + 1 < layers_.size()) z = z.cwiseMax(0.0);
    h = std::move(z);
  }
  return h;
}

Vector Network::Forward(const Vector& x) const {
  Vector h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Vector z = layers_[i].w * h + layers_[i].b;
    if (i + 1 < layers_.size()) z = z.cwiseMax(0.0);
    h = std::move(z);
  }
  return h;
}

Matrix Network::Forward(const Matrix& x, Cache& cache) const {
  cache.inputs.clear();
  cache.pre.clear();
  Matrix h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    cache.inputs.push_back(h);
    Matrix z = layers_[i].w * h;
    z.colwise() += layers_[i].b;
    cache.pre.push_back(z);
    h = i + 1 < layers_.size() ? Matrix(z.cwiseMax(0.0)) : std::move(z);
  }
  return h;
}

Gradients Network::Backward(const Cache& cache, const Matrix& d_out) const {
  Gradients g;
  g.dw.resize(layers_.size());
  g.db.resize(layers_.size());
  Matrix delta = d_out;
  for (std::size_t k = layers_.size(); k-- > 0;) {
    if (k + 1 < layers_.size()) {
      delta = delta.cwiseProduct(
          (cache.pre[k].array() > 0.0).cast<double>().matrix());
    }
    g.dw[k].noalias() = delta * cache.inputs[k].transpose();
    g.db[k] = delta.rowwise().sum();
    if (k > 0) delta = layers_[k].w.transpose() * delta;
  }
  return g;
}

Vector Network::Flatten() const {
  Vector flat(num_params());
  Eigen::Index at = 0;
  for (const Dense& d : layers_) {
    flat.segment(at, d.w.size()) = d.w.reshaped();
    at += d.w.size();
    flat.segment(at, d.b.size()) = d.b;
    at += d.b.size();
  }
  return flat;
}

void Network::Unflatten(const Vector& flat) {
  if (static_cast<std::size_t>(flat.size()) != num_params()) {
    throw ValidationError("flat parameter vector has the wrong size");
  }
  Eigen::Index at = 0;
  for (Dense& d : layers_) {
    d.w.reshaped() = flat.segment(at, d.w.size());
    at += d.w.size();
    d.b = flat.segment(at, d.b.size());
    at += d.b.size();
  }
}

bool Network::AllFinite() const {
  for (const Dense& d : layers_) {
    if (!d.w.allFinite() || !d.b.allFinite()) return false;
  }
  return true;
}

bool Network::operator==(const Network& other) const {
  if (arch_ != other.arch_ || layers_.size() != other.layers_.size()) return false;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Dense& a = layers_[i];
    const Dense& b = other.layers_[i];
    if (a.w.rows() != b.w.rows() || a.w.cols() != b.w.cols() || a.w != b.w ||
        a.b != b.b) {
      return false;
    }
  }
  return true;
}

Vector FlattenGradients(const Gradients& g) {
  Eigen::Index n = 0;
  for (std::size_t i = 0; i < g.dw.size(); ++i) n += g.dw[i].size() + g.db[i].size();
  Vector flat(n);
  Eigen::Index at = 0;
  for (std::size_t i = 0; i < g.dw.size(); ++i) {
    flat.segment(at, g.dw[i].size()) = g.dw[i].reshaped();
    at += g.dw[i].size();
    flat.segment(at, g.db[i].size()) = g.db[i];
    at += g.db[i].size();
  }
  return flat;
}

Adam::Adam(const Network& net, double learning_rate, double beta1, double beta2,
           double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {
  for (const Dense& d : net.layers()) {
    m_.dw.push_back(Matrix::Zero(d.w.rows(), d.w.cols()));
    m_.db.push_back(Vector::Zero(d.b.size()));
  }
  v_ = m_;
}

void Adam::Step(Network& net, const Gradients& grads) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  const double step = lr_ * std::sqrt(c2) / c1;
  auto& layers = net.mutable_layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    m_.dw[i] = beta1_ * m_.dw[i] + (1.0 - beta1_) * grads.dw[i];
    v_.dw[i] = beta2_ * v_.dw[i] + (1.0 - beta2_) * grads.dw[i].cwiseAbs2();
    layers[i].w.array() -=
        step * m_.dw[i].array() / (v_.dw[i].array().sqrt() + eps_);
    m_.db[i] = beta1_ * m_.db[i] + (1.0 - beta1_) * grads.db[i];
    v_.db[i] = beta2_ * v_.db[i] + (1.0 - beta2_) * grads.db[i].cwiseAbs2();
    layers[i].b.array() -=
        step * m_.db[i].array() / (v_.db[i].array().sqrt() + eps_);
  }
}

double MaskedHuberLoss(const Matrix& pred, const std::vector<int>& actions,
                       const Vector& targets, Matrix* d_pred) {
  const Eigen::Index n = pred.cols();
  if (d_pred) *d_pred = Matrix::Zero(pred.rows(), n);
  double loss = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double diff = pred(actions[j], j) - targets[j];
    const double ad = std::abs(diff);
    loss += ad <= 1.0 ? 0.5 * diff * diff : ad - 0.5;
    if (d_pred) {
      (*d_pred)(actions[j], j) = (ad <= 1.0 ? diff : (diff > 0 ? 1.0 : -1.0)) / n;
    }
  }
  return loss / n;
}

Vector Softmax(const Vector& logits) {
  const double m = logits.maxCoeff();
  Vector e = (logits.array() - m).exp();
  return e / e.sum();
}

Matrix SoftmaxColumns(const Matrix& logits) {
  Matrix p(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    p.col(j) = Softmax(logits.col(j));
  }
  return p;
}

double SoftmaxCrossEntropy(const Matrix& logits, const std::vector<int>& labels,
                           Matrix* d_logits) {
  const Eigen::Index n = logits.cols();
  const Matrix p = SoftmaxColumns(logits);
  double loss = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    loss -= std::log(std::max(p(labels[j], j), 1e-300));
  }
  if (d_logits) {
    *d_logits = p;
    for (Eigen::Index j = 0; j < n; ++j) (*d_logits)(labels[j], j) -= 1.0;
    *d_logits /= static_cast<double>(n);
  }
  return loss / n;
}

double MeanSquaredError(const Matrix& pred, const Vector& targets,
                        Matrix* d_pred) {
  const Eigen::Index n = pred.cols();
  const Eigen::RowVectorXd diff = pred.row(0) - targets.transpose();
  if (d_pred) *d_pred = (2.0 / n) * diff;
  return diff.squaredNorm() / n;
}

}  // namespace ess::nn
