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

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "fixtures.hpp"
#include "tmgld/oracle.hpp"

using namespace tmgld;
using namespace tmgld::testing;
using doctest::Approx;

TEST_CASE("conjugate posterior: one mode, one datum") {
  Eigen::MatrixXd phi = Eigen::MatrixXd::Ones(1, 1);
  Eigen::MatrixXd y = Eigen::MatrixXd::Ones(1, 1);
  const auto post = conjugate_posterior(phi, y, 1.0, 1.0, make_eigen_sequence(1.0, 2.0, 1));
  CHECK(post.mean(0, 0) == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(post.covariance(0, 0) == Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("conjugate posterior edge cases") {
  const auto e = make_eigen_sequence(2.0, 2.0, 4);
  const auto prior = conjugate_posterior(Eigen::MatrixXd(0, 4), Eigen::MatrixXd(0, 1), 3.0, 0.5, e);
  CHECK(prior.mean.isZero());
  for (Eigen::Index k = 0; k < 4; ++k) CHECK(prior.covariance(k, k) == Approx(e.mu[k] / 1.5));

  RngStream rng(2);
  Eigen::MatrixXd phi(10, 4);
  rng.fill_normal(phi);
  const auto zero = conjugate_posterior(phi, Eigen::MatrixXd::Zero(10, 1), 3.0, 0.5, e);
  CHECK(zero.mean.isZero());
  CHECK((zero.covariance - zero.covariance.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(zero.covariance);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  CHECK_THROWS_AS(conjugate_posterior(phi, Eigen::MatrixXd::Zero(9, 1), 3.0, 0.5, e), std::invalid_argument);
}

namespace {

class Quadratic : public Objective {
 public:
  explicit Quadratic(Eigen::MatrixXd Q) : Q_(std::move(Q)), e_(make_eigen_sequence(1.0, 2.0, Q_.rows())) {}
  std::size_t n_modes() const override { return e_.size(); }
  std::size_t dim_out() const override { return 1; }
  const EigenSequence& eigen() const override { return e_; }
  double value(const Coeffs& c) const override { return 0.5 * (c.transpose() * Q_ * c)(0, 0) + c.sum(); }
  Coeffs gradient(const Coeffs& c) const override { return Q_ * c + Coeffs::Ones(c.rows(), 1); }

 private:
  Eigen::MatrixXd Q_;
  EigenSequence e_;
};

class Smooth : public Quadratic {
 public:
  using Quadratic::Quadratic;
  double value(const Coeffs& c) const override { return std::sin(c(0, 0)) * std::exp(0.3 * c(1, 0)); }
  Coeffs gradient(const Coeffs& c) const override {
    Coeffs g(2, 1);
    g << std::cos(c(0, 0)) * std::exp(0.3 * c(1, 0)), 0.3 * std::sin(c(0, 0)) * std::exp(0.3 * c(1, 0));
    return g;
  }
};

}  // namespace

TEST_CASE("finite differences") {
  Eigen::MatrixXd Q(3, 3);
  Q << 2, 0.5, 0, 0.5, 1, 0.2, 0, 0.2, 3;
  Quadratic q(Q);
  Coeffs c(3, 1);
  c << 0.3, -1.2, 0.7;
  CHECK((finite_diff_grad(q, c, 1e-3) - q.gradient(c)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK_THROWS_AS(finite_diff_grad(q, c, 0.0), std::invalid_argument);

  Smooth s(Eigen::MatrixXd::Identity(2, 2));
  Coeffs x(2, 1);
  x << 0.4, 0.9;
  const double e1 = (finite_diff_grad(s, x, 1e-2) - s.gradient(x)).norm();
  const double e2 = (finite_diff_grad(s, x, 5e-3) - s.gradient(x)).norm();
  CHECK(e1 / e2 == Approx(4.0).epsilon(0.02));
}

TEST_CASE("small-ball probability") {
  GaussianMeasureSpec spec{1.0, 1.0, make_eigen_sequence(1.0, 2.0, 1)};
  const auto r = small_ball_mc(spec, 1.0, 200000, 3, Exec::serial);
  CHECK(std::abs(r.probability - 0.6826894921370859) < 3.0 * r.std_error);
  CHECK(r.neg_log == Approx(-std::log(r.probability)));
  CHECK(small_ball_mc(spec, 1e6, 1000, 3).probability == 1.0);
  const auto zero = small_ball_mc(spec, 0.0, 1000, 3);
  CHECK(zero.zero_hits);
  CHECK(std::isfinite(zero.neg_log));
  CHECK_THROWS_AS(small_ball_mc(spec, 1.0, 999, 3), std::invalid_argument);
}

TEST_CASE("Gaussian correlation estimates") {
  GaussianMeasureSpec spec{1.0, 1.0, make_eigen_sequence(1.0, 2.0, 3)};
  Eigen::Vector3d a(1.0, 4.0, 9.0);
  const auto same = gaussian_correlation_mc(spec, a, a, 100000, 1);
  CHECK(same.p_ab == same.p_a);
  CHECK(same.p_ab >= same.product);
  const auto whole = gaussian_correlation_mc(spec, a, Eigen::Vector3d::Zero(), 100000, 1);
  CHECK(whole.p_ab == whole.p_a);
  CHECK(whole.p_b == 1.0);
  CHECK(whole.holds);
  CHECK_THROWS_AS(gaussian_correlation_mc(spec, -a, a, 1000, 1), std::invalid_argument);
  // serial and parallel agree exactly
  Eigen::Vector3d b(3.0, 0.5, 2.0);
  const auto s = gaussian_correlation_mc(spec, a, b, 50000, 7, Exec::serial);
  const auto p = gaussian_correlation_mc(spec, a, b, 50000, 7, Exec::parallel);
  CHECK(s.p_ab == p.p_ab);
  CHECK(s.std_error == p.std_error);
}

TEST_CASE("reference chain matches the conjugate posterior") {
  RngStream rng(12);
  auto basis = cosine_basis(3);
  Dataset data = unit_interval_dataset(20, rng);
  SupervisedObjective obj(make_identity_model(1), basis, data, LossKind::squared);
  const double beta = 20.0, lambda = 0.5;
  const auto post = conjugate_posterior(basis->evaluate_rows(data.X), data.y, beta, lambda, basis->eigen);
  DynamicsConfig cfg;
  cfg.eta = 0.005;
  cfg.beta = beta;
  cfg.lambda = lambda;
  cfg.steps = 200000;
  cfg.burn_in = 2000;
  cfg.seed = 3;
  std::vector<TestFunction> tests;
  for (Eigen::Index k = 0; k < 3; ++k) tests.push_back([k](const Coeffs& c) { return c(k, 0); });
  const auto ref = reference_chain(cfg, obj, Coeffs::Zero(3, 1), tests, 0.04);
  for (Eigen::Index k = 0; k < 3; ++k) {
    const auto& m = ref.moments[static_cast<std::size_t>(k)];
    CHECK(std::abs(m.mean - post.mean(k, 0)) < 3.0 * m.std_error);
  }
  CHECK_THROWS_AS(reference_chain(cfg, obj, Coeffs::Zero(3, 1), tests, 0.01), std::invalid_argument);

  // doubling the horizon shrinks the error by roughly sqrt(2); a different seed agrees
  DynamicsConfig longer = cfg;
  longer.steps = 2 * cfg.steps - cfg.burn_in;
  const auto ref2 = reference_chain(longer, obj, Coeffs::Zero(3, 1), tests, 0.04);
  const double ratio = ref.moments[0].std_error / ref2.moments[0].std_error;
  CHECK(ratio == Approx(std::sqrt(2.0)).epsilon(0.35));
  DynamicsConfig other = cfg;
  other.seed = 99;
  const auto ref3 = reference_chain(other, obj, Coeffs::Zero(3, 1), tests, 0.04);
  for (std::size_t k = 0; k < 3; ++k) {
    const double joint = std::hypot(ref.moments[k].std_error, ref3.moments[k].std_error);
    CHECK(std::abs(ref.moments[k].mean - ref3.moments[k].mean) < 3.0 * joint);
  }
}
