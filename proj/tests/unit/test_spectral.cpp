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
#include "tmgld/rng.hpp"
#include "tmgld/spectral.hpp"

using namespace tmgld;
using doctest::Approx;

namespace {

Coeffs col(std::initializer_list<double> v) {
  Coeffs c(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) c(i++, 0) = x;
  return c;
}

EigenSequence seq(std::initializer_list<double> mu, double c_mu = 1.0) {
  EigenSequence e;
  e.mu = col(mu).col(0);
  e.c_mu = c_mu;
  return e;
}

}  // namespace

TEST_CASE("make_eigen_sequence") {
  const auto a = make_eigen_sequence(1.0, 2.0, 3);
  REQUIRE(a.size() == 3);
  CHECK(a.mu[0] == 1.0);
  CHECK(a.mu[1] == 0.25);
  CHECK(a.mu[2] == Approx(1.0 / 9.0));
  CHECK(make_eigen_sequence(1.0, 2.0, 1).mu.size() == 1);
  const auto b = make_eigen_sequence(2.0, 3.0, 2);
  CHECK(b.mu[0] == 2.0);
  CHECK(b.mu[1] == 0.25);
  CHECK_THROWS_AS(make_eigen_sequence(0.0, 2.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_eigen_sequence(-1.0, 2.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_eigen_sequence(1.0, 2.0, 0), std::invalid_argument);
  CHECK(eigen_condition_margin(a) == 0.0);
}

TEST_CASE("validator rejects sequences above the envelope") {
  CHECK_NOTHROW(validate_eigen_sequence(seq({1.0, 0.25})));
  CHECK_THROWS_AS(validate_eigen_sequence(seq({1.0, 0.5})), std::invalid_argument);
  CHECK_THROWS_AS(validate_eigen_sequence(seq({1.0, 0.0})), std::invalid_argument);
  CHECK_THROWS_AS(validate_eigen_sequence(seq({0.1, 0.2}, 4.0)), std::invalid_argument);
}

TEST_CASE("apply_A") {
  const auto e = seq({1.0, 0.25});
  const Coeffs r = apply_A(col({2, 2}), 1.0, e);
  CHECK(r(0, 0) == 2.0);
  CHECK(r(1, 0) == 8.0);
  CHECK(apply_A(col({0, 0}), 3.0, e).isZero());
  const Coeffs s = apply_A(col({1, 1}), 2.0, seq({1.0, 0.5}, 2.0));
  CHECK(s(0, 0) == 2.0);
  CHECK(s(1, 0) == 4.0);
  CHECK_THROWS_AS(apply_A(col({1, 1, 1}), 1.0, e), std::invalid_argument);
}

TEST_CASE("resolvent") {
  const auto e = seq({1.0, 0.25});
  const Coeffs a = col({1.3, -0.7});
  CHECK(resolvent(a, 0.0, 1.0, e) == a);
  const Coeffs r = resolvent(col({1, 1}), 0.1, 1.0, e);
  CHECK(r(0, 0) == Approx(0.9090909090909091).epsilon(1e-15));
  CHECK(r(1, 0) == Approx(0.7142857142857143).epsilon(1e-15));
  CHECK(std::abs(resolvent(col({1}), 1e12, 1.0, seq({1.0}))(0, 0)) < 1e-11);
  CHECK(resolvent(col({1}), std::numeric_limits<double>::infinity(), 1.0, seq({1.0}))(0, 0) == 0.0);
  CHECK_THROWS_AS(resolvent(a, -0.1, 1.0, e), std::invalid_argument);
}

TEST_CASE("resolvent contracts and inverts exactly") {
  RngStream rng(5);
  const auto e = make_eigen_sequence(1.5, 2.0, 20);
  for (int trial = 0; trial < 50; ++trial) {
    Coeffs a(20, 3);
    rng.fill_normal(a);
    const double eta = rng.uniform(0.0, 2.0), lambda = rng.uniform(0.01, 3.0);
    const Coeffs r = resolvent(a, eta, lambda, e);
    CHECK(r.norm() <= a.norm());
    Coeffs back = r;
    for (Eigen::Index k = 0; k < 20; ++k) back.row(k) *= 1.0 + eta * lambda / e.mu[k];
    CHECK((back - a).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("weighted_norm") {
  const auto e = seq({1.0, 0.25});
  CHECK(weighted_norm(col({3, 4}), e, 0.0) == 5.0);
  CHECK(weighted_norm(col({1, 1}), e, 0.5) == Approx(std::sqrt(1.25)).epsilon(1e-15));
  CHECK(weighted_norm(col({0, 0}), e, 0.5) == 0.0);
  RngStream rng(1);
  Coeffs a(2, 4);
  rng.fill_normal(a);
  CHECK(weighted_norm(a, e, 0.0) == a.norm());
  CHECK(hk_norm(col({1, 1}), e) == Approx(std::sqrt(5.0)));
}

TEST_CASE("project") {
  const Coeffs a = col({1, 2, 3});
  CHECK(project(a, 5) == a);
  CHECK(project(a, 3) == a);
  CHECK(project(a, 1) == col({1, 0, 0}));
  RngStream rng(2);
  Coeffs b(6, 2);
  rng.fill_normal(b);
  CHECK(project(project(b, 4), 4) == project(b, 4));
}

TEST_CASE("fractional_power_scale") {
  const Coeffs a = col({1, 1});
  CHECK(fractional_power_scale(a, seq({1.0, 0.25}), 0.0) == a);
  const Coeffs s = fractional_power_scale(a, seq({1.0, 0.25}), 2.0);
  CHECK(s(0, 0) == 1.0);
  CHECK(s(1, 0) == 0.25);
  CHECK(fractional_power_scale(col({1}), seq({0.04}), 1.0)(0, 0) == Approx(0.2).epsilon(1e-15));
  CHECK_THROWS_AS(fractional_power_scale(a, seq({1.0, 0.25}), -1.0), std::invalid_argument);
}

TEST_CASE("prior sampling matches per-mode variance") {
  GaussianMeasureSpec spec{10.0, 0.1, make_eigen_sequence(1.0, 2.0, 3)};
  CHECK(spec.mode_variance(0) == Approx(1.0));
  const auto basis = make_synthetic_basis(1, spec.eigen);
  RngStream rng(99);
  const int n = 100000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(3), sq = Eigen::VectorXd::Zero(3);
  for (int i = 0; i < n; ++i) {
    const Coeffs c = sample_prior(spec, basis, rng);
    sum += c.col(0);
    sq += c.col(0).cwiseAbs2();
  }
  for (Eigen::Index k = 0; k < 3; ++k) {
    const double var = spec.mode_variance(static_cast<std::size_t>(k));
    const double m = sum[k] / n;
    CHECK(std::abs(m) < 3.0 * std::sqrt(var / n));
    const double v = sq[k] / n;
    // Var of x^2 for a centred normal is 2 var^2
    CHECK(std::abs(v - var) < 3.0 * std::sqrt(2.0 * var * var / n));
  }
}
