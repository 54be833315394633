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

#ifndef TMGLD_TESTS_FIXTURES_HPP
#define TMGLD_TESTS_FIXTURES_HPP

#include <cmath>
#include <memory>

#include "tmgld/cloud.hpp"
#include "tmgld/objective.hpp"
#include "tmgld/rng.hpp"
#include "tmgld/spectral.hpp"
#include "tmgld/transport.hpp"

namespace tmgld::testing {

inline Dataset random_dataset(std::size_t n, std::size_t d, RngStream& rng, double radius = 1.0) {
  Dataset data;
  data.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  rng.fill_normal(data.X);
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
    const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
    data.X.row(i) *= r / data.X.row(i).norm();
  }
  data.y.resize(static_cast<Eigen::Index>(n));
  for (auto& v : data.y) v = rng.uniform(-1.0, 1.0);
  return data;
}

inline Dataset unit_interval_dataset(std::size_t n, RngStream& rng) {
  Dataset data;
  data.X.resize(static_cast<Eigen::Index>(n), 1);
  data.y.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    data.X(static_cast<Eigen::Index>(i), 0) = rng.uniform();
    data.y[static_cast<Eigen::Index>(i)] = rng.uniform(-1.0, 1.0);
  }
  return data;
}

struct TwoLayerFixture {
  ModelSpec model;
  BasisPtr basis;
};

inline TwoLayerFixture two_layer_fixture(std::size_t M, std::size_t d, std::size_t n_modes, RngStream& rng,
                                         double R = 1.0) {
  ParticleCloud cloud = sample_cloud(M, d, rng);
  auto basis = std::make_shared<const SpectralBasis>(gram_eigenbasis(cloud, 1.0, n_modes, d + 1));
  ClipConfig clip;
  clip.R = R;
  return {make_two_layer_model(cloud, clip), basis};
}

inline BasisPtr cosine_basis(std::size_t n_modes, std::size_t dim_in = 1, double c_mu = 1.0) {
  return std::make_shared<const SpectralBasis>(make_cosine_basis(dim_in, 1, make_eigen_sequence(c_mu, 2.0, n_modes)));
}

}  // namespace tmgld::testing

#endif  // TMGLD_TESTS_FIXTURES_HPP
