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
#include <limits>

#include "doctest.h"
#include "fixtures.hpp"
#include "tmgld/loss_audit.hpp"
#include "tmgld/losses.hpp"

using namespace tmgld;
using namespace tmgld::testing;
using doctest::Approx;

TEST_CASE("loss values") {
  CHECK(loss_value(LossKind::squared, 1.0, 0.5) == 0.25);
  CHECK(loss_value(LossKind::logistic, 1.0, 0.0) == Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(loss_eval_derivs(LossKind::squared, 1.0, 0.5, 1) == -1.0);
  CHECK(loss_eval_derivs(LossKind::squared, 1.0, 0.5, 2) == 2.0);
  CHECK(loss_eval_derivs(LossKind::squared, 1.0, 0.5, 3) == 0.0);
  CHECK_THROWS_AS(loss_eval_derivs(LossKind::squared, 1.0, 0.5, 4), std::invalid_argument);
  CHECK_THROWS_AS(loss_eval_derivs(LossKind::logistic, 0.5, 0.5, 0), std::invalid_argument);
  CHECK(std::isfinite(loss_value(LossKind::logistic, 1.0, -800.0)));
  CHECK(loss_value(LossKind::logistic, 1.0, -800.0) == Approx(800.0));
}

TEST_CASE("logistic derivatives match central differences and obey the bounds") {
  const double h = 1e-4;
  for (double y : {-1.0, 1.0}) {
    for (int i = -60; i <= 60; ++i) {
      const double u = i * 0.1;
      for (int order = 1; order <= 3; ++order) {
        const double fd =
            (loss_eval_derivs(LossKind::logistic, y, u + h, order - 1) - loss_eval_derivs(LossKind::logistic, y, u - h, order - 1)) /
            (2 * h);
        const double an = loss_eval_derivs(LossKind::logistic, y, u, order);
        CHECK(std::abs(an - fd) <= 1e-6 * std::max(std::abs(fd), 1e-2));
      }
      CHECK(std::abs(loss_derivative(LossKind::logistic, y, u)) <= 1.0);
      CHECK(std::abs(loss_eval_derivs(LossKind::logistic, y, u, 2)) <= 0.25);
      CHECK(loss_derivative(LossKind::logistic, y, u) == Approx(-y / (1 + std::exp(y * u))).epsilon(1e-12));
    }
  }
}

TEST_CASE("clipped loss range") {
  CHECK(clipped_loss_range(1.0, 1.0) == 10.0);
  CHECK(clipped_loss_range(1.0, 0.0) == 8.0);
  CHECK_THROWS_AS(clipped_loss_range(0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(clipped_loss_range(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("clipped squared loss never exceeds the range bound") {
  RngStream rng(314);
  const double R = 1.0, C = 0.5;
  auto fx = two_layer_fixture(8, 2, 8, rng, R);
  double worst = 0.0;
  const int draws = 1000, points = 100;  // 10^5 (W, x, y) triples
  for (int t = 0; t < draws; ++t) {
    Coeffs c(8, 3);
    rng.fill_normal(c);
    c *= 5.0;
    Dataset d = random_dataset(points, 2, rng);
    const TransportMap W{c, fx.basis, 0.0};
    const Eigen::VectorXd f = predict(fx.model, W, d.X);
    for (Eigen::Index i = 0; i < points; ++i) {
      const double y = rng.uniform(-R, R) + rng.uniform(-C, C);
      worst = std::max(worst, loss_value(LossKind::squared, y, f[i]));
    }
  }
  CHECK(worst <= clipped_loss_range(R, C));
}

TEST_CASE("Bernstein inequality") {
  const auto p = bernstein_check(0.4, 0.4, 1.0);
  CHECK(p.lhs == 0.0);
  CHECK(p.rhs == 0.0);
  CHECK(p.holds);
  const auto r = bernstein_check(0.3, 0.6, 1.0);
  CHECK(r.lhs == Approx(0.36335478525006903).epsilon(1e-12));
  CHECK(r.rhs == Approx(1.2865082817076852).epsilon(1e-12));
  CHECK(r.holds);
  CHECK_THROWS_AS(bernstein_check(0.01, 0.5, 1.0), std::invalid_argument);
  const auto band = bernstein_feasible_band(1.0);
  CHECK(band.first == Approx(1.0 / (1.0 + std::exp(1.0))));
  CHECK(band.second == Approx(1.0 / (1.0 + std::exp(-1.0))));
}

TEST_CASE("smoothness audit") {
  RngStream rng(10);
  auto fx = two_layer_fixture(10, 2, 10, rng);
  SupervisedObjective obj(fx.model, fx.basis, random_dataset(30, 2, rng), LossKind::squared);
  CHECK_THROWS_AS(smoothness_audit(obj, {1, 0, 0.0, 1.0}), std::invalid_argument);
  const auto a = smoothness_audit(obj, {4, 7, 0.0, 1.0});
  const auto b = smoothness_audit(obj, {12, 7, 0.0, 1.0});
  CHECK(a.empirical_lower_bounds);
  CHECK(a.B > 0.0);
  CHECK(b.B >= a.B);
  CHECK(b.L_lip >= a.L_lip);
  CHECK(b.R_bar >= a.R_bar);
  // |f| <= R and |dl/du| <= 2(|y| + R), while |d f / d V| <= 1 + R D per particle with weights summing to 1
  const double R = 1.0, D = 1.0, ymax = 1.0;
  const double envelope = 2.0 * (ymax + R) * (1.0 + R * D) * fx.basis->basis_vectors.cwiseAbs().maxCoeff() *
                          std::sqrt(static_cast<double>(fx.basis->n_modes));
  CHECK(b.B <= envelope);
  CHECK(b.R_bar <= clipped_loss_range(R, 0.0));
}
