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

#ifndef TMGLD_SPECTRAL_HPP
#define TMGLD_SPECTRAL_HPP

#include <cstddef>
#include <memory>

#include <Eigen/Core>

#include "tmgld/cloud.hpp"
#include "tmgld/rng.hpp"

namespace tmgld {

/// Mode coefficients of a map: one row per retained mode, one column per
/// output coordinate. The regulariser acts identically on every column.
using Coeffs = Eigen::MatrixXd;

// Eigenvalues mu_0 >= mu_1 >= ... > 0 of the kernel defining H_K, with the
// decay envelope c_mu (k+1)^{-2} they are expected to sit under.
struct EigenSequence {
  Eigen::VectorXd mu;
  double c_mu = 1.0;
  double decay_exponent = 2.0;

  std::size_t size() const { return static_cast<std::size_t>(mu.size()); }
};

/// mu_k = c_mu (k+1)^{-decay_exponent}; requires decay_exponent >= 2.
EigenSequence make_eigen_sequence(double c_mu, double decay_exponent, std::size_t n_modes);

/// min_k [c_mu (k+1)^{-2} - mu_k]. Non-negative iff the eigenvalue condition holds.
double eigen_condition_margin(const EigenSequence& eigen);

/// Throws std::invalid_argument unless mu is positive, non-increasing and
/// under the c_mu (k+1)^{-2} envelope (relative slack 1e-12).
void validate_eigen_sequence(const EigenSequence& eigen);

/// A f = lambda sum_k alpha_k / mu_k e_k.
Coeffs apply_A(const Coeffs& coeffs, double lambda, const EigenSequence& eigen);

/// S_eta = (I + eta A)^{-1}: row k scaled by 1 / (1 + eta lambda / mu_k).
Coeffs resolvent(const Coeffs& coeffs, double eta, double lambda, const EigenSequence& eigen);

/// In-place resolvent, used on the hot path of the chain.
void apply_resolvent_inplace(Coeffs& coeffs, double eta, double lambda, const EigenSequence& eigen);

/// (sum_k mu_k^{2 eps} |alpha_k|^2)^{1/2}; eps = 0 is the H norm.
double weighted_norm(const Coeffs& coeffs, const EigenSequence& eigen, double epsilon_exponent);

/// (sum_k |alpha_k|^2 / mu_k)^{1/2}, the H_K norm without the lambda weight.
double hk_norm(const Coeffs& coeffs, const EigenSequence& eigen);

/// P_N: zero every mode with index >= N.
Coeffs project(const Coeffs& coeffs, std::size_t N);

/// T_K^{gamma/2}: row k scaled by mu_k^{gamma/2}.
Coeffs fractional_power_scale(const Coeffs& coeffs, const EigenSequence& eigen, double gamma);

enum class BasisKind { synthetic_diagonal, gram_eigenbasis, cosine_tensor };

// Orthonormal system (e_k) of H together with its eigenvalues.
//
//  * synthetic_diagonal: abstract modes; features are supplied by the caller.
//  * gram_eigenbasis: eigenvectors of the rho_0-weighted Gaussian Gram matrix
//    of a point cloud. basis_vectors holds e_k at the cloud points; other
//    points are reached through the Nystrom extension.
//  * cosine_tensor: products of sqrt(2) cos(j pi x) on [0,1]^dim_in, ordered
//    by total degree; orthonormal under the uniform law.
struct SpectralBasis {
  BasisKind kind = BasisKind::synthetic_diagonal;
  std::size_t dim_in = 0;
  std::size_t dim_out = 1;
  std::size_t n_modes = 0;
  EigenSequence eigen;
  Eigen::MatrixXd basis_vectors;  // n_points x n_modes (gram only)

  // gram-eigenbasis data for out-of-sample evaluation
  Eigen::MatrixXd nodes;
  Eigen::VectorXd node_weights;
  double bandwidth = 1.0;
  std::size_t usable_rank = 0;

  // cosine-tensor multi-indices, n_modes x dim_in
  Eigen::MatrixXi frequencies;

  /// e_k(x) for every retained mode.
  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Row i holds e_k(X.row(i)).
  Eigen::MatrixXd evaluate_rows(const Eigen::Ref<const Eigen::MatrixXd>& X) const;

  /// Coefficients of the map whose values at the basis nodes are given
  /// (rho_0-weighted projection). Gram basis only.
  Coeffs project_values(const Eigen::Ref<const Eigen::MatrixXd>& values) const;
};

using BasisPtr = std::shared_ptr<const SpectralBasis>;

SpectralBasis make_synthetic_basis(std::size_t dim_out, EigenSequence eigen);

/// Cosine tensor basis on [0,1]^dim_in with the given eigenvalues (one per mode).
SpectralBasis make_cosine_basis(std::size_t dim_in, std::size_t dim_out, EigenSequence eigen);

/// Eigendecomposition of the weighted Gaussian-kernel Gram matrix
/// K_ij = exp(-|p_i - p_j|^2 / (2 h^2)) on the given points. Columns of
/// basis_vectors are orthonormal under the weights. When the numerical rank
/// (eigenvalues above 1e-12 mu_0) is below n_modes, the basis is truncated
/// and usable_rank reports the retained count.
SpectralBasis gram_eigenbasis(const Eigen::Ref<const Eigen::MatrixXd>& points, const Eigen::VectorXd& weights,
                              double kernel_bandwidth, std::size_t n_modes, std::size_t dim_out);

/// Gram eigenbasis over a cloud's joint (w, a) points.
SpectralBasis gram_eigenbasis(const ParticleCloud& cloud, double kernel_bandwidth, std::size_t n_modes,
                              std::size_t dim_out);

// Gaussian measure nu_beta on H with mean 0 and covariance (beta A)^{-1}.
struct GaussianMeasureSpec {
  double beta = 1.0;
  double lambda = 1.0;
  EigenSequence eigen;

  double mode_variance(std::size_t k) const { return eigen.mu[static_cast<Eigen::Index>(k)] / (beta * lambda); }
};

/// One draw from nu_beta: independent N(0, mu_k / (beta lambda)) per mode and output column.
Coeffs sample_prior(const GaussianMeasureSpec& spec, const SpectralBasis& basis, RngStream& rng);

}  // namespace tmgld

#endif  // TMGLD_SPECTRAL_HPP
