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

#ifndef TMGLD_ORACLE_HPP
#define TMGLD_ORACLE_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "tmgld/kernels.hpp"
#include "tmgld/langevin.hpp"
#include "tmgld/objective.hpp"
#include "tmgld/spectral.hpp"
#include "tmgld/stats.hpp"

namespace tmgld {

// Gaussian posterior over mode coefficients. Every output column shares the
// same covariance; the columns are independent.
struct GaussianPosterior {
  Coeffs mean;                 // n_modes x d_out
  Eigen::MatrixXd covariance;  // n_modes x n_modes
  Eigen::MatrixXd precision;
};

/// Exact posterior of the linear-Gaussian model under the squared loss
/// (y - f)^2: precision beta [(2/n) Phi^T Phi + lambda diag(1/mu)],
/// mean = precision^{-1} beta (2/n) Phi^T Y. With no rows this is the prior.
GaussianPosterior conjugate_posterior(const Eigen::MatrixXd& features, const Eigen::MatrixXd& Y, double beta,
                                      double lambda, const EigenSequence& eigen);

/// Central finite differences of objective.value, one coefficient at a time.
Coeffs finite_diff_grad(const Objective& objective, const Coeffs& coeffs, double step);

struct SmallBallEstimate {
  double probability = 0.0;
  double std_error = 0.0;
  double neg_log = 0.0;
  // Set when no sample fell inside the ball. probability then holds the
  // rule-of-three upper bound 3/n and neg_log the matching lower bound.
  bool zero_hits = false;
};

/// nu_beta-mass of {h : |h|_H <= radius} over the retained modes of one output coordinate.
SmallBallEstimate small_ball_mc(const GaussianMeasureSpec& spec, double radius, std::uint64_t n_samples,
                                std::uint64_t seed, Exec exec = Exec::parallel);

struct CorrelationEstimate {
  double p_a = 0.0;
  double p_b = 0.0;
  double p_ab = 0.0;
  double product = 0.0;    // p_a p_b
  double std_error = 0.0;  // of p_ab - p_a p_b
  bool holds = false;      // p_ab >= product - 3 std_error
};

inline constexpr std::size_t kCorrelationMaxDim = 64;

/// Shared-sample estimate of nu(A n B) against nu(A) nu(B) for the centred
/// ellipsoids A = {sum a_i x_i^2 <= 1}, B = {sum b_i x_i^2 <= 1}.
CorrelationEstimate gaussian_correlation_mc(const GaussianMeasureSpec& spec, const Eigen::VectorXd& a,
                                            const Eigen::VectorXd& b, std::uint64_t n_samples, std::uint64_t seed,
                                            Exec exec = Exec::parallel);

using TestFunction = std::function<double(const Coeffs&)>;

struct ReferenceMoments {
  std::vector<BatchMeans> moments;  // one per test function
  std::size_t samples = 0;
};

/// Long small-step chain used as a proxy for the invariant measure. Requires
/// cfg.eta <= eta_test / 8. The proxy carries its own O(eta_ref) bias.
ReferenceMoments reference_chain(const DynamicsConfig& cfg, const Objective& objective, const Coeffs& init,
                                 const std::vector<TestFunction>& tests, double eta_test,
                                 std::size_t n_batches = 50);

}  // namespace tmgld

#endif  // TMGLD_ORACLE_HPP
