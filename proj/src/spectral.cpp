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

#include "tmgld/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

namespace tmgld {

namespace {

void require_modes(const Coeffs& coeffs, const EigenSequence& eigen, const char* who) {
  if (static_cast<std::size_t>(coeffs.rows()) > eigen.size())
    throw std::invalid_argument(std::string(who) + ": coefficient mode count " + std::to_string(coeffs.rows()) +
                                " exceeds eigen sequence length " + std::to_string(eigen.size()));
}

}  // namespace

EigenSequence make_eigen_sequence(double c_mu, double decay_exponent, std::size_t n_modes) {
  if (!(c_mu > 0.0)) throw std::invalid_argument("make_eigen_sequence: c_mu must be positive");
  if (n_modes == 0) throw std::invalid_argument("make_eigen_sequence: n_modes must be >= 1");
  if (!(decay_exponent >= 2.0)) throw std::invalid_argument("make_eigen_sequence: decay_exponent must be >= 2");
  EigenSequence eigen;
  eigen.c_mu = c_mu;
  eigen.decay_exponent = decay_exponent;
  eigen.mu.resize(static_cast<Eigen::Index>(n_modes));
  for (std::size_t k = 0; k < n_modes; ++k)
    eigen.mu[static_cast<Eigen::Index>(k)] = c_mu * std::pow(static_cast<double>(k + 1), -decay_exponent);
  return eigen;
}

double eigen_condition_margin(const EigenSequence& eigen) {
  double margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < eigen.mu.size(); ++k) {
    const double envelope = eigen.c_mu / (static_cast<double>(k + 1) * static_cast<double>(k + 1));
    margin = std::min(margin, envelope - eigen.mu[k]);
  }
  return margin;
}

void validate_eigen_sequence(const EigenSequence& eigen) {
  if (eigen.mu.size() == 0) throw std::invalid_argument("eigen sequence is empty");
  for (Eigen::Index k = 0; k < eigen.mu.size(); ++k) {
    if (!(eigen.mu[k] > 0.0)) throw std::invalid_argument("eigen sequence: mu_" + std::to_string(k) + " not positive");
    if (k > 0 && eigen.mu[k] > eigen.mu[k - 1])
      throw std::invalid_argument("eigen sequence: not non-increasing at k=" + std::to_string(k));
    const double envelope = eigen.c_mu / (static_cast<double>(k + 1) * static_cast<double>(k + 1));
    if (eigen.mu[k] > envelope * (1.0 + 1e-12))
      throw std::invalid_argument("eigen sequence: mu_" + std::to_string(k) + " exceeds c_mu (k+1)^-2");
  }
}

Coeffs apply_A(const Coeffs& coeffs, double lambda, const EigenSequence& eigen) {
  require_modes(coeffs, eigen, "apply_A");
  Coeffs out = coeffs;
  for (Eigen::Index k = 0; k < out.rows(); ++k) out.row(k) *= lambda / eigen.mu[k];
  return out;
}

Coeffs resolvent(const Coeffs& coeffs, double eta, double lambda, const EigenSequence& eigen) {
  Coeffs out = coeffs;
  apply_resolvent_inplace(out, eta, lambda, eigen);
  return out;
}

void apply_resolvent_inplace(Coeffs& coeffs, double eta, double lambda, const EigenSequence& eigen) {
  if (eta < 0.0) throw std::invalid_argument("resolvent: eta must be non-negative");
  require_modes(coeffs, eigen, "resolvent");
  if (eta == 0.0) return;
  for (Eigen::Index k = 0; k < coeffs.rows(); ++k) {
    const double damp = eta * lambda / eigen.mu[k];
    if (std::isinf(damp)) {
      coeffs.row(k).setZero();
    } else {
      coeffs.row(k) /= 1.0 + damp;
    }
  }
}

double weighted_norm(const Coeffs& coeffs, const EigenSequence& eigen, double epsilon_exponent) {
  if (epsilon_exponent == 0.0) return coeffs.norm();
  require_modes(coeffs, eigen, "weighted_norm");
  double s = 0.0;
  for (Eigen::Index k = 0; k < coeffs.rows(); ++k)
    s += std::pow(eigen.mu[k], 2.0 * epsilon_exponent) * coeffs.row(k).squaredNorm();
  return std::sqrt(s);
}

double hk_norm(const Coeffs& coeffs, const EigenSequence& eigen) {
  require_modes(coeffs, eigen, "hk_norm");
  double s = 0.0;
  for (Eigen::Index k = 0; k < coeffs.rows(); ++k) s += coeffs.row(k).squaredNorm() / eigen.mu[k];
  return std::sqrt(s);
}

Coeffs project(const Coeffs& coeffs, std::size_t N) {
  Coeffs out = coeffs;
  const auto n = static_cast<Eigen::Index>(N);
  if (n < out.rows()) out.bottomRows(out.rows() - n).setZero();
  return out;
}

Coeffs fractional_power_scale(const Coeffs& coeffs, const EigenSequence& eigen, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("fractional_power_scale: gamma must be >= 0");
  if (gamma == 0.0) return coeffs;
  require_modes(coeffs, eigen, "fractional_power_scale");
  Coeffs out = coeffs;
  for (Eigen::Index k = 0; k < out.rows(); ++k) out.row(k) *= std::pow(eigen.mu[k], 0.5 * gamma);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double gaussian_kernel(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                       double h) {
  return std::exp(-(x - y).squaredNorm() / (2.0 * h * h));
}

Eigen::MatrixXi enumerate_frequencies(std::size_t dim_in, std::size_t n_modes) {
  Eigen::MatrixXi freq(static_cast<Eigen::Index>(n_modes), static_cast<Eigen::Index>(dim_in));
  std::size_t found = 0;
  std::vector<int> idx(dim_in, 0);
  // all multi-indices of total degree t, first coordinate varying slowest
  std::function<void(std::size_t, int)> emit = [&](std::size_t pos, int remaining) {
    if (found == n_modes) return;
    if (pos + 1 == dim_in) {
      idx[pos] = remaining;
      for (std::size_t j = 0; j < dim_in; ++j)
        freq(static_cast<Eigen::Index>(found), static_cast<Eigen::Index>(j)) = idx[j];
      ++found;
      return;
    }
    for (int v = remaining; v >= 0 && found < n_modes; --v) {
      idx[pos] = v;
      emit(pos + 1, remaining - v);
    }
  };
  for (int t = 0; found < n_modes; ++t) emit(0, t);
  return freq;
}

}  // namespace

Eigen::VectorXd SpectralBasis::evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(n_modes));
  switch (kind) {
    case BasisKind::cosine_tensor: {
      if (static_cast<std::size_t>(x.size()) != dim_in) throw std::invalid_argument("evaluate: dimension mismatch");
      for (Eigen::Index k = 0; k < out.size(); ++k) {
        double v = 1.0;
        for (Eigen::Index j = 0; j < x.size(); ++j) {
          const int f = frequencies(k, j);
          if (f != 0) v *= std::numbers::sqrt2 * std::cos(f * std::numbers::pi * x[j]);
        }
        out[k] = v;
      }
      return out;
    }
    case BasisKind::gram_eigenbasis: {
      if (x.size() != nodes.cols()) throw std::invalid_argument("evaluate: dimension mismatch");
      // Nystrom: e_k(x) = mu_k^{-1} sum_j p_j K(x, x_j) e_k(x_j)
      Eigen::VectorXd kx(nodes.rows());
      for (Eigen::Index j = 0; j < nodes.rows(); ++j)
        kx[j] = node_weights[j] * gaussian_kernel(x, nodes.row(j).transpose(), bandwidth);
      out = basis_vectors.transpose() * kx;
      for (Eigen::Index k = 0; k < out.size(); ++k) out[k] /= eigen.mu[k];
      return out;
    }
    case BasisKind::synthetic_diagonal:
      break;
  }
  throw std::invalid_argument("evaluate: synthetic-diagonal basis has no point evaluation");
}

Eigen::MatrixXd SpectralBasis::evaluate_rows(const Eigen::Ref<const Eigen::MatrixXd>& X) const {
  Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(n_modes));
  for (Eigen::Index i = 0; i < X.rows(); ++i) out.row(i) = evaluate(X.row(i).transpose()).transpose();
  return out;
}

Coeffs SpectralBasis::project_values(const Eigen::Ref<const Eigen::MatrixXd>& values) const {
  if (kind != BasisKind::gram_eigenbasis) throw std::invalid_argument("project_values: gram basis required");
  if (values.rows() != basis_vectors.rows()) throw std::invalid_argument("project_values: row count mismatch");
  return basis_vectors.transpose() * node_weights.asDiagonal() * values;
}

SpectralBasis make_synthetic_basis(std::size_t dim_out, EigenSequence eigen) {
  validate_eigen_sequence(eigen);
  SpectralBasis basis;
  basis.kind = BasisKind::synthetic_diagonal;
  basis.dim_out = dim_out;
  basis.n_modes = eigen.size();
  basis.usable_rank = eigen.size();
  basis.eigen = std::move(eigen);
  return basis;
}

SpectralBasis make_cosine_basis(std::size_t dim_in, std::size_t dim_out, EigenSequence eigen) {
  if (dim_in == 0) throw std::invalid_argument("make_cosine_basis: dim_in must be >= 1");
  validate_eigen_sequence(eigen);
  SpectralBasis basis;
  basis.kind = BasisKind::cosine_tensor;
  basis.dim_in = dim_in;
  basis.dim_out = dim_out;
  basis.n_modes = eigen.size();
  basis.usable_rank = eigen.size();
  basis.frequencies = enumerate_frequencies(dim_in, basis.n_modes);
  basis.eigen = std::move(eigen);
  return basis;
}

SpectralBasis gram_eigenbasis(const Eigen::Ref<const Eigen::MatrixXd>& points, const Eigen::VectorXd& weights,
                              double kernel_bandwidth, std::size_t n_modes, std::size_t dim_out) {
  const Eigen::Index M = points.rows();
  if (M == 0) throw std::invalid_argument("gram_eigenbasis: empty cloud");
  if (weights.size() != M) throw std::invalid_argument("gram_eigenbasis: weight count mismatch");
  if (!(kernel_bandwidth > 0.0)) throw std::invalid_argument("gram_eigenbasis: bandwidth must be positive");
  if (n_modes == 0 || n_modes > static_cast<std::size_t>(M))
    throw std::invalid_argument("gram_eigenbasis: n_modes must lie in [1, cloud size]");
  if ((weights.array() <= 0.0).any()) throw std::invalid_argument("gram_eigenbasis: weights must be positive");

  Eigen::MatrixXd gram(M, M);
  for (Eigen::Index i = 0; i < M; ++i)
    for (Eigen::Index j = i; j < M; ++j)
      gram(i, j) = gram(j, i) = gaussian_kernel(points.row(i).transpose(), points.row(j).transpose(), kernel_bandwidth);

  // D^{1/2} K D^{1/2} v = mu v  <=>  e = D^{-1/2} v is weighted-orthonormal
  const Eigen::VectorXd sqrt_w = weights.cwiseSqrt();
  const Eigen::MatrixXd sym = sqrt_w.asDiagonal() * gram * sqrt_w.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("gram_eigenbasis: eigensolver failed");

  // Eigen returns ascending order
  const Eigen::VectorXd values = solver.eigenvalues().reverse();
  const Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();

  std::size_t rank = 0;
  for (Eigen::Index k = 0; k < M; ++k)
    if (values[k] > 1e-12 * values[0]) ++rank;
  const std::size_t kept = std::min(rank, n_modes);

  SpectralBasis basis;
  basis.kind = BasisKind::gram_eigenbasis;
  basis.dim_in = static_cast<std::size_t>(points.cols());
  basis.dim_out = dim_out;
  basis.n_modes = kept;
  basis.usable_rank = rank;
  basis.nodes = points;
  basis.node_weights = weights;
  basis.bandwidth = kernel_bandwidth;
  basis.eigen.mu = values.head(static_cast<Eigen::Index>(kept));
  basis.eigen.decay_exponent = 2.0;
  double c_mu = 0.0;
  for (std::size_t k = 0; k < kept; ++k)
    c_mu = std::max(c_mu, basis.eigen.mu[static_cast<Eigen::Index>(k)] * static_cast<double>((k + 1) * (k + 1)));
  basis.eigen.c_mu = c_mu;
  basis.basis_vectors =
      sqrt_w.cwiseInverse().asDiagonal() * vectors.leftCols(static_cast<Eigen::Index>(kept));
  return basis;
}

SpectralBasis gram_eigenbasis(const ParticleCloud& cloud, double kernel_bandwidth, std::size_t n_modes,
                              std::size_t dim_out) {
  cloud.validate();
  return gram_eigenbasis(cloud.joint_points(), cloud.weights, kernel_bandwidth, n_modes, dim_out);
}

Coeffs sample_prior(const GaussianMeasureSpec& spec, const SpectralBasis& basis, RngStream& rng) {
  if (spec.eigen.size() < basis.n_modes) throw std::invalid_argument("sample_prior: eigen sequence shorter than basis");
  if (!(spec.beta > 0.0) || !(spec.lambda > 0.0)) throw std::invalid_argument("sample_prior: beta, lambda must be > 0");
  Coeffs out(static_cast<Eigen::Index>(basis.n_modes), static_cast<Eigen::Index>(basis.dim_out));
  rng.fill_normal(out);
  for (Eigen::Index k = 0; k < out.rows(); ++k) out.row(k) *= std::sqrt(spec.mode_variance(static_cast<std::size_t>(k)));
  return out;
}

}  // namespace tmgld
