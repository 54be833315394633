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

#include "tmgld/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace tmgld {

GaussianPosterior conjugate_posterior(const Eigen::MatrixXd& features, const Eigen::MatrixXd& Y, double beta,
                                      double lambda, const EigenSequence& eigen) {
  const auto K = eigen.mu.size();
  if (features.cols() != K) throw std::invalid_argument("conjugate_posterior: feature columns must equal n_modes");
  if (features.rows() != Y.rows()) throw std::invalid_argument("conjugate_posterior: features and targets disagree");
  if (!(beta > 0.0) || !(lambda > 0.0)) throw std::invalid_argument("conjugate_posterior: beta, lambda must be > 0");
  const Eigen::Index d = Y.cols() > 0 ? Y.cols() : 1;
  const auto n = static_cast<double>(features.rows());

  GaussianPosterior post;
  post.precision = beta * lambda * eigen.mu.cwiseInverse().asDiagonal().toDenseMatrix();
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(K, d);
  if (features.rows() > 0) {
    post.precision.noalias() += beta * (2.0 / n) * features.transpose() * features;
    rhs = beta * (2.0 / n) * features.transpose() * Y;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(post.precision);
  if (llt.info() != Eigen::Success) throw std::runtime_error("conjugate_posterior: precision is not positive definite");
  post.mean = llt.solve(rhs);
  post.covariance = llt.solve(Eigen::MatrixXd::Identity(K, K));
  post.covariance = 0.5 * (post.covariance + post.covariance.transpose()).eval();
  return post;
}

Coeffs finite_diff_grad(const Objective& objective, const Coeffs& coeffs, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite_diff_grad: step must be positive");
  Coeffs grad(coeffs.rows(), coeffs.cols());
  Coeffs probe = coeffs;
  for (Eigen::Index j = 0; j < coeffs.cols(); ++j) {
    for (Eigen::Index k = 0; k < coeffs.rows(); ++k) {
      const double orig = probe(k, j);
      probe(k, j) = orig + step;
      const double up = objective.value(probe);
      probe(k, j) = orig - step;
      const double down = objective.value(probe);
      probe(k, j) = orig;
      grad(k, j) = (up - down) / (2.0 * step);
    }
  }
  return grad;
}

namespace {

Eigen::VectorXd prior_sd(const GaussianMeasureSpec& spec) {
  if (!(spec.beta > 0.0) || !(spec.lambda > 0.0)) throw std::invalid_argument("prior: beta, lambda must be > 0");
  return (spec.eigen.mu / (spec.beta * spec.lambda)).cwiseSqrt();
}

}  // namespace

SmallBallEstimate small_ball_mc(const GaussianMeasureSpec& spec, double radius, std::uint64_t n_samples,
                                std::uint64_t seed, Exec exec) {
  if (n_samples < 1000) throw std::invalid_argument("small_ball_mc: need at least 1000 samples");
  if (!(radius >= 0.0)) throw std::invalid_argument("small_ball_mc: radius must be >= 0");
  const Eigen::VectorXd sd = prior_sd(spec);
  const double w = radius > 0.0 ? 1.0 / (radius * radius) : std::numeric_limits<double>::infinity();
  const Eigen::VectorXd a = Eigen::VectorXd::Constant(sd.size(), w);
  const Eigen::VectorXd none = Eigen::VectorXd::Zero(sd.size());
  const auto c = kernels::ellipsoid_counts(exec, sd, a, none, n_samples, seed);

  SmallBallEstimate out;
  const auto n = static_cast<double>(c.n);
  if (c.in_a == 0) {
    out.zero_hits = true;
    out.probability = 3.0 / n;
    out.neg_log = -std::log(out.probability);
    return out;
  }
  out.probability = static_cast<double>(c.in_a) / n;
  out.std_error = std::sqrt(out.probability * (1.0 - out.probability) / n);
  out.neg_log = -std::log(out.probability);
  return out;
}

CorrelationEstimate gaussian_correlation_mc(const GaussianMeasureSpec& spec, const Eigen::VectorXd& a,
                                            const Eigen::VectorXd& b, std::uint64_t n_samples, std::uint64_t seed,
                                            Exec exec) {
  const Eigen::VectorXd sd = prior_sd(spec);
  if (a.size() != sd.size() || b.size() != sd.size())
    throw std::invalid_argument("gaussian_correlation_mc: weight vectors must match the number of modes");
  if (static_cast<std::size_t>(sd.size()) > kCorrelationMaxDim)
    throw std::invalid_argument("gaussian_correlation_mc: dimension exceeds cap");
  if ((a.array() < 0.0).any() || (b.array() < 0.0).any())
    throw std::invalid_argument("gaussian_correlation_mc: weights must be non-negative");
  if (n_samples < 2) throw std::invalid_argument("gaussian_correlation_mc: need at least 2 samples");
  const auto c = kernels::ellipsoid_counts(exec, sd, a, b, n_samples, seed);

  CorrelationEstimate out;
  const auto n = static_cast<double>(c.n);
  out.p_a = static_cast<double>(c.in_a) / n;
  out.p_b = static_cast<double>(c.in_b) / n;
  out.p_ab = static_cast<double>(c.in_ab) / n;
  out.product = out.p_a * out.p_b;
  // Influence function of p_ab - p_a p_b: 1_AB - p_b 1_A - p_a 1_B.
  const double pa = out.p_a, pb = out.p_b, pab = out.p_ab;
  const double second = pab * std::pow(1.0 - pb - pa, 2) + (pa - pab) * pb * pb + (pb - pab) * pa * pa;
  const double first = pab - 2.0 * pa * pb;
  const double var = std::max(second - first * first, 0.0);
  out.std_error = std::sqrt(var / n);
  out.holds = out.p_ab >= out.product - 3.0 * out.std_error;
  return out;
}

ReferenceMoments reference_chain(const DynamicsConfig& cfg, const Objective& objective, const Coeffs& init,
                                 const std::vector<TestFunction>& tests, double eta_test, std::size_t n_batches) {
  if (!(cfg.eta > 0.0) || cfg.eta > eta_test / 8.0)
    throw std::invalid_argument("reference_chain: eta_ref must be positive and at most eta_test / 8");
  if (cfg.steps <= cfg.burn_in) throw std::invalid_argument("reference_chain: steps must exceed burn_in");
  std::vector<std::vector<double>> series(tests.size());
  std::size_t kept = 0;
  Observables quiet;
  quiet.record = false;
  run_chain(cfg, objective, init, quiet, [&](const ChainState& s) {
    for (std::size_t i = 0; i < tests.size(); ++i) series[i].push_back(tests[i](s.coeffs));
    ++kept;
  });
  ReferenceMoments out;
  out.samples = kept;
  for (const auto& s : series) out.moments.push_back(batch_means(s, n_batches));
  return out;
}

}  // namespace tmgld
