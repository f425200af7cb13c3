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

// Central finite-difference check of Network::Backward.

#ifndef ESS_TESTS_GRADCHECK_HPP_
#define ESS_TESTS_GRADCHECK_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

#include "ess/nn.hpp"
#include "ess/rng.hpp"

namespace ess::testing {

struct GradCheck {
  double relative_error = 0.0;  // ||analytic - numeric|| / (||analytic|| + ||numeric||)
  int coordinates = 0;
};

// Loss 0.5 * ||net(x) - target||^2 / batch.
inline double SquaredLoss(const nn::Network& net, const nn::Matrix& x, const nn::Matrix& t) {
  return 0.5 * (net.Forward(x) - t).squaredNorm() / x.cols();
}

// Checks `per_layer` random coordinates of every weight matrix and bias
// (all of them when the layer is smaller).
inline GradCheck CheckGradients(const nn::Network& net, const nn::Matrix& x,
                                const nn::Matrix& target, int per_layer, Rng& rng,
                                double h = 1e-5) {
  nn::Network::Cache cache;
  const nn::Matrix out = net.Forward(x, cache);
  const nn::Vector analytic =
      nn::FlattenGradients(net.Backward(cache, (out - target) / static_cast<double>(x.cols())));
  nn::Vector flat = net.Flatten();

  std::vector<Eigen::Index> coords;
  Eigen::Index at = 0;
  auto pick = [&](Eigen::Index size) {
    if (size <= per_layer) {
      for (Eigen::Index i = 0; i < size; ++i) coords.push_back(at + i);
    } else {
      for (int i = 0; i < per_layer; ++i) {
        coords.push_back(at + static_cast<Eigen::Index>(UniformIndex(rng, size)));
      }
    }
    at += size;
  };
  for (const nn::Dense& d : net.layers()) {
    pick(d.w.size());
    pick(d.b.size());
  }

  nn::Network probe = net;
  std::vector<double> a, n;
  for (Eigen::Index c : coords) {
    const double keep = flat[c];
    flat[c] = keep + h;
    probe.Unflatten(flat);
    const double up = SquaredLoss(probe, x, target);
    flat[c] = keep - h;
    probe.Unflatten(flat);
    const double down = SquaredLoss(probe, x, target);
    flat[c] = keep;
    a.push_back(analytic[c]);
    n.push_back((up - down) / (2 * h));
  }
  double diff = 0, na = 0, nn_ = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - n[i]) * (a[i] - n[i]);
    na += a[i] * a[i];
    nn_ += n[i] * n[i];
  }
  GradCheck r;
  r.coordinates = static_cast<int>(coords.size());
  const double denom = std::sqrt(na) + std::sqrt(nn_);
  r.relative_error = denom == 0 ? 0.0 : std::sqrt(diff) / denom;
  return r;
}

inline nn::Matrix RandomMatrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double scale) {
  nn::Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = scale * StandardNormal(rng);
  }
  return m;
}

}  // namespace ess::testing

#endif  // ESS_TESTS_GRADCHECK_HPP_
