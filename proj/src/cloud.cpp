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

#include "tmgld/cloud.hpp"

#include <cmath>
#include <stdexcept>

namespace tmgld {

Eigen::MatrixXd ParticleCloud::joint_points() const {
  Eigen::MatrixXd out(w.rows(), w.cols() + 1);
  out.leftCols(w.cols()) = w;
  out.col(w.cols()) = a;
  return out;
}

void ParticleCloud::validate() const {
  if (w.rows() == 0) throw std::invalid_argument("cloud: no particles");
  if (a.size() != w.rows() || weights.size() != w.rows()) throw std::invalid_argument("cloud: size mismatch");
  if ((weights.array() < 0.0).any()) throw std::invalid_argument("cloud: negative mass");
  if (std::abs(weights.sum() - 1.0) > 1e-12) throw std::invalid_argument("cloud: masses must sum to 1");
}

ParticleCloud make_finite_width_cloud(Eigen::MatrixXd w, Eigen::VectorXd a) {
  ParticleCloud cloud;
  const auto M = w.rows();
  cloud.w = std::move(w);
  cloud.a = std::move(a);
  cloud.weights = Eigen::VectorXd::Constant(M, 1.0 / static_cast<double>(M));
  cloud.mode = CloudMode::finite_width;
  cloud.validate();
  return cloud;
}

ParticleCloud sample_cloud(std::size_t M, std::size_t d, RngStream& rng, double w_scale, double a_range) {
  if (M == 0 || d == 0) throw std::invalid_argument("sample_cloud: M and d must be >= 1");
  ParticleCloud cloud;
  cloud.w.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(d));
  cloud.a.resize(static_cast<Eigen::Index>(M));
  for (Eigen::Index m = 0; m < cloud.w.rows(); ++m) {
    for (Eigen::Index j = 0; j < cloud.w.cols(); ++j) cloud.w(m, j) = w_scale * rng.normal();
    cloud.a[m] = rng.uniform(-a_range, a_range);
  }
  cloud.weights = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(M), 1.0 / static_cast<double>(M));
  cloud.mode = CloudMode::monte_carlo;
  return cloud;
}

}  // namespace tmgld
