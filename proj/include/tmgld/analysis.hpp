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

#ifndef TMGLD_ANALYSIS_HPP
#define TMGLD_ANALYSIS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tmgld/losses.hpp"
#include "tmgld/objective.hpp"
#include "tmgld/spectral.hpp"
#include "tmgld/stats.hpp"
#include "tmgld/transport.hpp"

namespace tmgld {

struct MixingConstants {
  double rho = 0.0;      // 1 / (1 + lambda eta / mu_0)
  double b = 0.0;        // (mu_0 / lambda) B + c_mu / (beta lambda)
  double b_bar = 0.0;    // max(b, 1)
  double kappa = 0.0;    // b_bar + 1
  double V_bar = 0.0;
  double Lambda_star = 0.0;
  double C_W0 = 0.0;
  double delta_used = 0.0;
  // Continuous-time variant (rho^{1/eta} replaced by exp(-lambda / mu_1)).
  double V_bar_0 = 0.0;
  double Lambda_star_0 = 0.0;
};

struct MixingInputs {
  double eta = 0.0;
  double beta = 1.0;
  double lambda = 1.0;
  double mu_0 = 1.0;
  double mu_1 = 1.0;
  double c_mu = 1.0;
  double B = 1.0;
  double R_bar = 1.0;
  double delta = 0.5;  // conventional default; the constant is not pinned down
};

/// Geometric-ergodicity constants. eta = 0 yields the continuous-time values in
/// V_bar / Lambda_star as well. Throws if a log argument is <= 1.
MixingConstants mixing_constants(const MixingInputs& in);

/// (R^2/sqrt n)[2(1 + 2 beta/sqrt n) + log((1 + e^{R^2/2})/delta)] + 2 Xi.
double pac_bayes_bound(double R_bar, double beta, std::size_t n, double delta, double Xi);

struct DecayFit {
  double rate = 0.0;  // -slope / eta
  double r_squared = 0.0;
  double slope = 0.0;
};

/// Least squares of log gap against k. Needs >= 4 points with positive gaps.
DecayFit fit_geometric_decay(std::span<const double> k, std::span<const double> gaps, double eta);

/// log-log slope of bias against eta; >= 3 positive points.
LineFit fit_stepsize_bias(std::span<const double> etas, std::span<const double> biases);

/// log-log slope of excess risk against n; >= 4 positive points.
LineFit excess_risk_rate_fit(std::span<const double> ns, std::span<const double> risks);

struct EpsilonStar {
  double value = 0.0;  // max(raw, floor)
  double raw = 0.0;    // root of phi(eps) = beta eps^2 (or the bracket end)
  double floor = 0.0;  // n^{-1/(2(2-s))}
  bool floor_binds = false;
  bool below_bracket = false;  // phi(lo) <= beta lo^2 already
  bool unresolved = false;     // phi(hi) > beta hi^2: no root in the bracket
};

/// Bisection for inf{eps : phi(eps) <= beta eps^2} on [lo, hi] with phi non-increasing.
EpsilonStar epsilon_star(const std::function<double(double)>& phi, double beta, std::size_t n, double s,
                         double lo = 1e-8, double hi = 1e8);

/// Same on tabulated (eps, phi) pairs sorted by eps; phi is interpolated linearly.
EpsilonStar epsilon_star(std::span<const double> eps_grid, std::span<const double> phi_grid, double beta,
                         std::size_t n, double s);

struct RateParams {
  double gamma = 1.0;
  double theta = 0.5;
  double s = 1.0;
  std::optional<double> epsilon_star;

  double alpha_tilde() const { return 1.0 / (2.0 * (gamma + 1.0)); }
  /// Throws unless gamma > 1/2, 0 < theta < 1 - alpha_tilde, 0 < s <= 1.
  void validate() const;
};

/// ceil(eps^{-1/(theta (gamma + 1))}), proportionality constant 1.
std::size_t truncation_for_bias(double epsilon, double theta, double gamma);

struct ConcentrationEstimate {
  double bias = 0.0;       // lambda beta |h|_{H_K}^2 at the ridge minimiser
  double small_ball = 0.0; // -log nu({|h|_H <= eps})
  double value = 0.0;      // bias + small_ball
  bool small_ball_bounded = false;  // zero MC hits: small_ball is a lower bound
};

/// Upper estimate of the concentration function at eps for a target given by
/// its coefficients: min lambda beta |h|^2_{H_K} over |h - target|_H <= eps
/// (solved exactly on the truncated diagonal), plus the Monte-Carlo small-ball term.
ConcentrationEstimate concentration_function(const Coeffs& target, const EigenSequence& eigen, double beta,
                                             double lambda, double epsilon, std::uint64_t n_samples,
                                             std::uint64_t seed);

/// Fraction of sampled maps whose sign disagrees with bayes_sign at some grid point.
double classification_error_prob(const std::vector<TransportMap>& samples, const ModelSpec& model,
                                 const std::function<double(const Eigen::VectorXd&)>& bayes_sign,
                                 const Eigen::MatrixXd& x_grid);

enum class AuditStatus { pass, fail, not_checkable };

struct AuditItem {
  std::string name;
  AuditStatus status = AuditStatus::not_checkable;
  double margin = 0.0;
  std::string detail;
};

struct AuditReport {
  std::vector<AuditItem> items;
  bool all_checkable_pass() const;
};

struct AuditOptions {
  std::size_t n_probes = 16;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  double probe_scale = 1.0;
  // P(Y = 1 | x) of a synthetic classification generator, evaluated on low_noise_grid.
  std::function<double(const Eigen::VectorXd&)> class_probability;
  Eigen::MatrixXd low_noise_grid;
  double low_noise_threshold = 0.0;
};

AuditReport assumption_audit(const SupervisedObjective& objective, const AuditOptions& opts);

/// Audit for a bare eigen sequence (no model attached).
AuditItem eigen_condition_audit(const EigenSequence& eigen);

const char* to_string(AuditStatus s);

}  // namespace tmgld

#endif  // TMGLD_ANALYSIS_HPP
