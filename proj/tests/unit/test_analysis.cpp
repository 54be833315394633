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
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "tmgld/analysis.hpp"

using namespace tmgld;
using namespace tmgld::testing;
using doctest::Approx;

TEST_CASE("geometric-ergodicity constants") {
  MixingInputs in;
  in.eta = 0.1;
  in.lambda = 1.0;
  in.mu_0 = 1.0;
  in.mu_1 = 0.25;
  in.B = 1.0;
  in.c_mu = 1.0;
  in.beta = 10.0;
  in.R_bar = 1.0;
  in.delta = 0.5;
  const auto c = mixing_constants(in);
  CHECK(c.rho == Approx(0.9090909090909091).epsilon(1e-15));
  CHECK(c.b == Approx(1.1).epsilon(1e-15));
  CHECK(c.b_bar == Approx(1.1).epsilon(1e-15));
  CHECK(c.kappa == Approx(2.1).epsilon(1e-15));
  CHECK(c.V_bar == Approx(9.848120519116403).epsilon(1e-13));
  CHECK(c.Lambda_star == Approx(0.016365213472219465).epsilon(1e-13));
  CHECK(c.C_W0 == Approx(26.981053090144446).epsilon(1e-13));
  CHECK(c.V_bar_0 == Approx(6.328774216627715).epsilon(1e-13));
  CHECK(c.Lambda_star_0 == Approx(0.01823809604427338).epsilon(1e-13));
  CHECK(c.delta_used == 0.5);

  MixingInputs zero = in;
  zero.eta = 0.0;
  const auto z = mixing_constants(zero);
  CHECK(z.V_bar == z.V_bar_0);
  CHECK(z.rho == 1.0);

  // Lambda* decreases in mu_0
  double prev = std::numeric_limits<double>::infinity();
  for (double mu0 = 0.2; mu0 <= 5.0; mu0 += 0.2) {
    MixingInputs g = in;
    g.mu_0 = mu0;
    const double L = mixing_constants(g).Lambda_star;
    CHECK(L > 0.0);
    CHECK(L < prev);
    prev = L;
  }
  MixingInputs bad = in;
  bad.delta = 1.0;
  CHECK_THROWS_AS(mixing_constants(bad), std::invalid_argument);
  bad = in;
  bad.beta = 0.05;
  CHECK_THROWS_AS(mixing_constants(bad), std::invalid_argument);
}

TEST_CASE("PAC-Bayes bound") {
  CHECK(pac_bayes_bound(1.0, 10.0, 100, 0.5, 0.0) == Approx(0.7667224164740052).epsilon(1e-14));
  CHECK(pac_bayes_bound(1.0, 10.0, 100, 0.5, 0.1) - pac_bayes_bound(1.0, 10.0, 100, 0.5, 0.0) == Approx(0.2));
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t n = 401; n < 100000; n *= 2) {
    const double v = pac_bayes_bound(1.0, 10.0, n, 0.5, 0.0);
    CHECK(v < prev);
    prev = v;
  }
  for (double r = 0.5; r < 3.0; r += 0.25) CHECK(pac_bayes_bound(r + 0.25, 10, 100, 0.5, 0) > pac_bayes_bound(r, 10, 100, 0.5, 0));
  for (double d = 0.1; d < 0.9; d += 0.1) CHECK(pac_bayes_bound(1, 10, 100, d + 0.1, 0) < pac_bayes_bound(1, 10, 100, d, 0));
  CHECK_THROWS_AS(pac_bayes_bound(1, 10, 0, 0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(pac_bayes_bound(1, 10, 10, 1.5, 0), std::invalid_argument);
}

TEST_CASE("geometric decay fit") {
  const double eta = 0.05, r = 0.9;
  std::vector<double> k, g, flat;
  for (int i = 0; i < 20; ++i) {
    k.push_back(i);
    g.push_back(3.0 * std::pow(r, i));
    flat.push_back(2.0);
  }
  const auto f = fit_geometric_decay(k, g, eta);
  CHECK(f.rate == Approx(-std::log(r) / eta).epsilon(1e-12));
  CHECK(f.r_squared == Approx(1.0));
  CHECK(fit_geometric_decay(k, flat, eta).rate == Approx(0.0).scale(1.0));

  RngStream rng(3);
  std::vector<double> noisy;
  for (double v : g) noisy.push_back(v * (1.0 + 0.05 * rng.uniform(-1.0, 1.0)));
  CHECK(fit_geometric_decay(k, noisy, eta).rate == Approx(-std::log(r) / eta).epsilon(0.1));

  std::vector<double> bad = g;
  bad[3] = 0.0;
  CHECK_THROWS_AS(fit_geometric_decay(k, bad, eta), std::invalid_argument);
  std::vector<double> short_k{0, 1, 2}, short_g{1, 0.5, 0.25};
  CHECK_THROWS_AS(fit_geometric_decay(short_k, short_g, eta), std::invalid_argument);
}

TEST_CASE("log-log slope fits") {
  std::vector<double> etas{0.2, 0.1, 0.05, 0.025}, half, lin;
  for (double e : etas) {
    half.push_back(2.0 * std::sqrt(e));
    lin.push_back(0.3 * e);
  }
  CHECK(fit_stepsize_bias(etas, half).slope == Approx(0.5).epsilon(1e-12));
  CHECK(fit_stepsize_bias(etas, lin).slope == Approx(1.0).epsilon(1e-12));
  std::vector<double> neg{0.1, -0.1, 0.2, 0.3};
  CHECK_THROWS_AS(fit_stepsize_bias(etas, neg), std::invalid_argument);

  std::vector<double> ns{64, 128, 256, 512}, inv, cst;
  for (double n : ns) {
    inv.push_back(5.0 / n);
    cst.push_back(0.7);
  }
  CHECK(excess_risk_rate_fit(ns, inv).slope == Approx(-1.0).epsilon(1e-12));
  CHECK(excess_risk_rate_fit(ns, cst).slope == Approx(0.0).scale(1.0));
  std::vector<double> three{1, 2, 3};
  CHECK_THROWS_AS(excess_risk_rate_fit(three, three), std::invalid_argument);
}

TEST_CASE("epsilon star") {
  const auto e = epsilon_star([](double x) { return 1.0 / x; }, 100.0, 1000000, 1.0);
  CHECK(e.value == Approx(0.2154434690031884).epsilon(1e-12));
  CHECK_FALSE(e.floor_binds);
  CHECK_FALSE(e.unresolved);

  const auto z = epsilon_star([](double) { return 0.0; }, 100.0, 400, 1.0);
  CHECK(z.value == Approx(std::pow(400.0, -0.5)));
  CHECK(z.floor_binds);

  std::vector<double> eps{0.1, 0.2, 0.3, 0.4}, phi{5.0, 4.0, 10.0 * 0.3 * 0.3, 0.0};
  // beta = 10: g = phi - 10 eps^2 = 4.9, 3.6, 0.0, ... -> root exactly at 0.3
  const auto gp = epsilon_star(eps, phi, 10.0, 1000000000, 1.0);
  CHECK(gp.raw == Approx(0.3).epsilon(1e-12));

  const auto un = epsilon_star([](double x) { return 1e30 / x; }, 1.0, 100, 1.0, 1e-3, 1e3);
  CHECK(un.unresolved);

  // invariant: phi(eps*) <= beta eps*^2 and the point one step below violates it
  auto phi2 = [](double x) { return 3.0 / (x * x * x); };
  const auto s2 = epsilon_star(phi2, 50.0, 1000000, 1.0);
  const double h = 1e-6;
  CHECK(phi2(s2.raw) <= 50.0 * s2.raw * s2.raw * (1 + 1e-12));
  CHECK(phi2(s2.raw - h) > 50.0 * (s2.raw - h) * (s2.raw - h));
}

TEST_CASE("truncation for bias") {
  CHECK(truncation_for_bias(0.01, 0.5, 1.0) == 100);
  CHECK(truncation_for_bias(1.0, 0.5, 1.0) == 1);
  CHECK(truncation_for_bias(0.1, 1.0 / 3.0, 0.5) == 100);
  CHECK_THROWS_AS(truncation_for_bias(0.1, 0.8, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(truncation_for_bias(0.1, 0.0, 1.0), std::invalid_argument);
  RateParams rp;
  rp.gamma = 1.0;
  rp.theta = 0.5;
  CHECK(rp.alpha_tilde() == 0.25);
  CHECK_NOTHROW(rp.validate());
  rp.theta = 0.8;
  CHECK_THROWS_AS(rp.validate(), std::invalid_argument);
}

TEST_CASE("concentration function estimate") {
  const auto e = make_eigen_sequence(1.0, 2.0, 6);
  Coeffs t = Coeffs::Zero(6, 1);
  t(0, 0) = 1.0;
  t(3, 0) = 0.5;
  const auto small = concentration_function(t, e, 10.0, 0.1, 0.2, 20000, 1);
  const auto large = concentration_function(t, e, 10.0, 0.1, 0.8, 20000, 1);
  CHECK(small.bias > large.bias);
  CHECK(small.value > large.value);
  const auto inside = concentration_function(t, e, 10.0, 0.1, 2.0, 20000, 1);
  CHECK(inside.bias == 0.0);
}

TEST_CASE("classification error probability") {
  auto basis = cosine_basis(4);
  const auto model = make_identity_model(1);
  Coeffs c = Coeffs::Zero(4, 1);
  c(1, 0) = 1.0;  // sqrt(2) cos(pi x): positive below 1/2
  auto sign = [](const Eigen::VectorXd& x) { return x[0] < 0.5 ? 1.0 : -1.0; };
  Eigen::MatrixXd grid(20, 1);
  for (Eigen::Index i = 0; i < 20; ++i) grid(i, 0) = i < 10 ? 0.02 * i : 0.6 + 0.02 * (i - 10);
  std::vector<TransportMap> good(5, TransportMap{c, basis, 0.0});
  CHECK(classification_error_prob(good, model, sign, grid) == 0.0);
  std::vector<TransportMap> flipped(5, TransportMap{-c, basis, 0.0});
  CHECK(classification_error_prob(flipped, model, sign, grid) == 1.0);
  CHECK_THROWS_AS(classification_error_prob({}, model, sign, grid), std::invalid_argument);
}

TEST_CASE("assumption audit") {
  CHECK(eigen_condition_audit(make_eigen_sequence(1.0, 2.0, 10)).status == AuditStatus::pass);
  CHECK(eigen_condition_audit(make_eigen_sequence(1.0, 2.0, 10)).margin == 0.0);
  EigenSequence slow;
  slow.c_mu = 1.0;
  slow.mu.resize(10);
  for (Eigen::Index k = 0; k < 10; ++k) slow.mu[k] = 1.0 / static_cast<double>(k + 1);
  CHECK(eigen_condition_audit(slow).status == AuditStatus::fail);

  RngStream rng(1);
  Dataset data = unit_interval_dataset(50, rng);
  for (auto& y : data.y) y = y > 0 ? 1.0 : -1.0;
  SupervisedObjective obj(make_identity_model(1), cosine_basis(5), data, LossKind::logistic);
  AuditOptions opts;
  opts.class_probability = [](const Eigen::VectorXd& x) { return x[0] < 0.5 ? 0.9 : 0.15; };
  opts.low_noise_grid = Eigen::VectorXd::LinSpaced(50, 0.0, 1.0);
  opts.low_noise_threshold = 0.3;
  const auto rep = assumption_audit(obj, opts);
  CHECK(rep.all_checkable_pass());
  bool saw_noise = false, saw_unverifiable = false;
  for (const auto& item : rep.items) {
    if (item.name == "strong low noise") {
      saw_noise = true;
      CHECK(item.status == AuditStatus::pass);
      CHECK(item.margin == Approx(0.35));
    }
    if (item.status == AuditStatus::not_checkable) saw_unverifiable = true;
  }
  CHECK(saw_noise);
  CHECK(saw_unverifiable);
  opts.class_probability = [](const Eigen::VectorXd&) { return 0.6; };
  CHECK_FALSE(assumption_audit(obj, opts).all_checkable_pass());
}
