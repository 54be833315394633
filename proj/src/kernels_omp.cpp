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
#include <vector>

#include <omp.h>

#include "kernels_detail.hpp"

namespace tmgld::kernels {

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

namespace omp {

Eigen::VectorXd two_layer_forward(const TwoLayerArgs& m, const Eigen::MatrixXd& X) {
  Eigen::VectorXd f(X.rows());
  const Eigen::MatrixXd clipped = detail::clipped_values(m);
  const Eigen::Index n = X.rows();
#pragma omp parallel for schedule(static) if (n * m.values.rows() > 4096)
  for (Eigen::Index i = 0; i < n; ++i) f[i] = detail::two_layer_point(m, clipped, X, i);
  return f;
}

Eigen::MatrixXd two_layer_value_grad(const TwoLayerArgs& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& dl) {
  Eigen::MatrixXd out(m.values.rows(), m.values.cols());
  const Eigen::Index M = m.values.rows();
#pragma omp parallel for schedule(static) if (M * X.rows() > 4096)
  for (Eigen::Index p = 0; p < M; ++p) detail::two_layer_particle_grad(m, X, dl, p, out);
  return out;
}

Eigen::VectorXd resnet_forward(const ResNetArgs& m, const Eigen::MatrixXd& X) {
  const auto cache = detail::resnet_cache(m);
  Eigen::VectorXd f(X.rows());
  const Eigen::Index n = X.rows();
#pragma omp parallel
  {
    Eigen::MatrixXd h, z;
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) f[i] = detail::resnet_point(m, cache, X.row(i).transpose(), h, z);
  }
  return f;
}

Eigen::MatrixXd resnet_value_grad(const ResNetArgs& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& dl) {
  const auto cache = detail::resnet_cache(m);
  const Eigen::Index chunks = (X.rows() + detail::kResNetChunk - 1) / detail::kResNetChunk;
  std::vector<Eigen::MatrixXd> parts(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index c = 0; c < chunks; ++c) {
    const Eigen::Index begin = c * detail::kResNetChunk;
    const Eigen::Index end = std::min<Eigen::Index>(begin + detail::kResNetChunk, X.rows());
    parts[static_cast<std::size_t>(c)] = detail::resnet_chunk_grad(m, cache, X, dl, begin, end);
  }
  // chunk order fixed, matching the serial reduction
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(m.values.rows(), m.values.cols());
  for (const auto& part : parts) total += part;
  return total;
}

EllipsoidCounts ellipsoid_counts(const Eigen::VectorXd& sd, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                 std::uint64_t n_samples, std::uint64_t seed) {
  const auto chunks = static_cast<std::int64_t>((n_samples + kMonteCarloChunk - 1) / kMonteCarloChunk);
  std::uint64_t n = 0, in_a = 0, in_b = 0, in_ab = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : n, in_a, in_b, in_ab)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const auto uc = static_cast<std::uint64_t>(c);
    const std::uint64_t count = std::min(kMonteCarloChunk, n_samples - uc * kMonteCarloChunk);
    const auto part = detail::ellipsoid_chunk(sd, a, b, count, seed, uc);
    n += part.n;
    in_a += part.in_a;
    in_b += part.in_b;
    in_ab += part.in_ab;
  }
  return {n, in_a, in_b, in_ab};
}

}  // namespace omp
}  // namespace tmgld::kernels
