/*
 * Copyright 2026 The tmgld Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <limits>

#include "kernels_detail.hpp"

namespace tmgld {

double clip(double v, double R) {
  if (std::isinf(R)) return v;
  return R * std::tanh(v / R);
}

double clip_derivative(double v, double R) {
  if (std::isinf(R)) return 1.0;
  const double t = std::tanh(v / R);
  return 1.0 - t * t;
}

Eigen::VectorXd clip(const Eigen::VectorXd& v, double R) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = clip(v[i], R);
  return out;
}

double activate(double u, Activation act) {
  if (act == Activation::tanh) return std::tanh(u);
  return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

double activate_derivative(double u, Activation act) {
  if (act == Activation::tanh) {
    const double t = std::tanh(u);
    return 1.0 - t * t;
  }
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

namespace kernels::serial {

Eigen::VectorXd two_layer_forward(const TwoLayerArgs& m, const Eigen::MatrixXd& X) {
  Eigen::VectorXd f(X.rows());
  const Eigen::MatrixXd clipped = detail::clipped_values(m);
  for (Eigen::Index i = 0; i < X.rows(); ++i) f[i] = detail::two_layer_point(m, clipped, X, i);
  return f;
}

Eigen::MatrixXd two_layer_value_grad(const TwoLayerArgs& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& dl) {
  Eigen::MatrixXd out(m.values.rows(), m.values.cols());
  for (Eigen::Index p = 0; p < m.values.rows(); ++p) detail::two_layer_particle_grad(m, X, dl, p, out);
  return out;
}

Eigen::VectorXd resnet_forward(const ResNetArgs& m, const Eigen::MatrixXd& X) {
  const auto cache = detail::resnet_cache(m);
  Eigen::VectorXd f(X.rows());
  Eigen::MatrixXd h, z;
  for (Eigen::Index i = 0; i < X.rows(); ++i) f[i] = detail::resnet_point(m, cache, X.row(i).transpose(), h, z);
  return f;
}

Eigen::MatrixXd resnet_value_grad(const ResNetArgs& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& dl) {
  const auto cache = detail::resnet_cache(m);
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(m.values.rows(), m.values.cols());
  for (Eigen::Index begin = 0; begin < X.rows(); begin += detail::kResNetChunk) {
    const Eigen::Index end = std::min<Eigen::Index>(begin + detail::kResNetChunk, X.rows());
    total += detail::resnet_chunk_grad(m, cache, X, dl, begin, end);
  }
  return total;
}

EllipsoidCounts ellipsoid_counts(const Eigen::VectorXd& sd, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                 std::uint64_t n_samples, std::uint64_t seed) {
  EllipsoidCounts total;
  const std::uint64_t chunks = (n_samples + kMonteCarloChunk - 1) / kMonteCarloChunk;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    const std::uint64_t count = std::min(kMonteCarloChunk, n_samples - c * kMonteCarloChunk);
    const auto part = detail::ellipsoid_chunk(sd, a, b, count, seed, c);
    total.n += part.n;
    total.in_a += part.in_a;
    total.in_b += part.in_b;
    total.in_ab += part.in_ab;
  }
  return total;
}

}  // namespace kernels::serial
}  // namespace tmgld
