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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tmgld/cloud.hpp"
#include "tmgld/rng.hpp"
#include "tmgld/spectral.hpp"

using namespace tmgld;
using doctest::Approx;

TEST_CASE("cloud construction and validation") {
  RngStream rng(4);
  const auto c = sample_cloud(10, 3, rng, 1.0, 1.0);
  CHECK(c.size() == 10);
  CHECK(c.dim() == 3);
  CHECK(c.mode == CloudMode::monte_carlo);
  CHECK(c.weights.sum() == Approx(1.0).epsilon(1e-14));
  CHECK(c.a.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(c.joint_points().cols() == 4);

  auto f = make_finite_width_cloud(Eigen::MatrixXd::Ones(2, 2), Eigen::VectorXd::Ones(2));
  CHECK(f.mode == CloudMode::finite_width);
  f.weights[0] = 0.9;
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_finite_width_cloud(Eigen::MatrixXd::Ones(2, 2), Eigen::VectorXd::Ones(3)),
                  std::invalid_argument);
}

TEST_CASE("gram eigenbasis: single particle") {
  Eigen::MatrixXd p(1, 2);
  p << 0.3, -0.2;
  const auto b = gram_eigenbasis(p, Eigen::VectorXd::Ones(1), 0.7, 1, 1);
  CHECK(b.n_modes == 1);
  CHECK(b.eigen.mu[0] == Approx(1.0));
  CHECK(std::abs(b.basis_vectors(0, 0)) == Approx(1.0));
}

TEST_CASE("gram eigenbasis: orthonormality, ordering, reconstruction, Nystrom") {
  RngStream rng(8);
  const auto cloud = sample_cloud(25, 2, rng);
  const auto b = gram_eigenbasis(cloud, 1.3, 25, 1);
  const auto P = cloud.joint_points();
  REQUIRE(b.usable_rank >= 1);
  const auto K = static_cast<Eigen::Index>(b.n_modes);
  const Eigen::MatrixXd G = b.basis_vectors.transpose() * cloud.weights.asDiagonal() * b.basis_vectors;
  CHECK((G - Eigen::MatrixXd::Identity(K, K)).cwiseAbs().maxCoeff() < 1e-10);
  for (Eigen::Index k = 1; k < K; ++k) CHECK(b.eigen.mu[k] <= b.eigen.mu[k - 1]);
  CHECK_NOTHROW(validate_eigen_sequence(b.eigen));

  if (b.usable_rank == 25) {
    const Eigen::MatrixXd rec = b.basis_vectors * b.eigen.mu.asDiagonal() * b.basis_vectors.transpose();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < 25; ++i)
      for (Eigen::Index j = 0; j < 25; ++j) {
        const double kij = std::exp(-(P.row(i) - P.row(j)).squaredNorm() / (2.0 * 1.3 * 1.3));
        worst = std::max(worst, std::abs(rec(i, j) - kij));
      }
    CHECK(worst < 1e-8);
  }
  // Nystrom extension agrees with the stored values at the nodes
  const Eigen::MatrixXd E = b.evaluate_rows(P);
  CHECK((E.leftCols(5) - b.basis_vectors.leftCols(5)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_AS(gram_eigenbasis(cloud, 1.0, 26, 1), std::invalid_argument);
  CHECK_THROWS_AS(gram_eigenbasis(cloud, 0.0, 3, 1), std::invalid_argument);
}

TEST_CASE("gram eigenbasis reports usable rank for duplicated particles") {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(4, 1);
  p(2, 0) = p(3, 0) = 1.0;
  const auto b = gram_eigenbasis(p, Eigen::VectorXd::Constant(4, 0.25), 1.0, 4, 1);
  CHECK(b.usable_rank == 2);
  CHECK(b.n_modes == 2);
}

TEST_CASE("cosine basis is orthonormal under the uniform law") {
  const auto b = make_cosine_basis(2, 1, make_eigen_sequence(1.0, 2.0, 6));
  CHECK(b.frequencies.row(0).isZero());
  const int g = 200;  // midpoint rule is exact for these trigonometric products
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      Eigen::Vector2d x((i + 0.5) / g, (j + 0.5) / g);
      const Eigen::VectorXd e = b.evaluate(x);
      gram += e * e.transpose();
    }
  gram /= g * g;
  CHECK((gram - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
  CHECK_THROWS_AS(b.evaluate(Eigen::VectorXd::Zero(3)), std::invalid_argument);
  const auto s = make_synthetic_basis(1, make_eigen_sequence(1.0, 2.0, 2));
  CHECK_THROWS_AS(s.evaluate(Eigen::VectorXd::Zero(1)), std::invalid_argument);
}
