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

#ifndef TMGLD_TRANSPORT_HPP
#define TMGLD_TRANSPORT_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "tmgld/cloud.hpp"
#include "tmgld/kernels.hpp"
#include "tmgld/losses.hpp"
#include "tmgld/spectral.hpp"

namespace tmgld {

// Coefficient representation of a transport map W in H. With gamma > 0 the
// predictor is built from T_K^{gamma/2} W instead of W.
struct TransportMap {
  Coeffs coeffs;
  BasisPtr basis;
  double gamma = 0.0;

  Coeffs effective_coeffs() const { return fractional_power_scale(coeffs, basis->eigen, gamma); }
};

struct ClipConfig {
  double R = 1.0;  // +inf disables clipping
  Activation activation = Activation::tanh;
  double input_bound_D = 1.0;
};

enum class Architecture { two_layer, identity_map, resnet, wasserstein };

// Output layout of the map per architecture:
//   two_layer:    d+1 columns, first d are W_1 (inner weights), last is W_2
//   identity_map: 1 column, f_W(x) = W(x)
//   resnet:       d T columns, block t in [t d, (t+1) d)
//   wasserstein:  d columns, f_W(x) = W(x)
struct ModelSpec {
  Architecture arch = Architecture::two_layer;
  ParticleCloud cloud;
  ClipConfig clip;
  std::size_t input_dim = 0;
  std::size_t resnet_blocks = 0;
  std::vector<Eigen::MatrixXd> resnet_a;  // T x (M x d), fixed
  Eigen::VectorXd readout;                // u

  std::size_t map_dim_out() const;

  /// Throws std::invalid_argument if the basis cannot carry this model.
  void validate(const SpectralBasis& basis) const;
};

struct Dataset {
  Eigen::MatrixXd X;  // n x input_dim
  Eigen::VectorXd y;

  std::size_t size() const { return static_cast<std::size_t>(X.rows()); }
};

ModelSpec make_two_layer_model(ParticleCloud cloud, ClipConfig clip);
ModelSpec make_identity_model(std::size_t input_dim);
ModelSpec make_wasserstein_model(std::size_t dim);

/// T residual blocks over the cloud's w-coordinates; second-layer vectors and
/// the readout are drawn once from `rng` (a scaled by a_scale / sqrt(d)).
ModelSpec make_resnet_model(ParticleCloud cloud, ClipConfig clip, std::size_t blocks, RngStream& rng,
                            double a_scale = 1.0);

/// W_0 = identity, represented on the basis (exact at the cloud points for a
/// full gram basis). identity_map models start at zero.
Coeffs identity_coeffs(const ModelSpec& model, const SpectralBasis& basis);

/// Map values at the cloud points, M x d_out.
Eigen::MatrixXd map_values_at_cloud(const TransportMap& W);

/// Scalar prediction f_W(x) for two_layer, identity_map and resnet.
double forward(const ModelSpec& model, const TransportMap& W, const Eigen::VectorXd& x);

/// Vector output W(x) for wasserstein (and identity_map as a 1-vector).
Eigen::VectorXd forward_vector(const ModelSpec& model, const TransportMap& W, const Eigen::VectorXd& x);

/// Batched scalar predictions.
Eigen::VectorXd predict(const ModelSpec& model, const TransportMap& W, const Eigen::MatrixXd& X,
                        Exec exec = Exec::parallel);

/// Empirical risk (1/n) sum_i l(y_i, f_W(x_i)).
double empirical_risk(const ModelSpec& model, const TransportMap& W, const Dataset& data, LossKind loss,
                      Exec exec = Exec::parallel);

/// Gradient of the empirical risk in mode-coefficient space (the H gradient
/// for an orthonormal basis), including clip and T_K^{gamma/2} chain rules.
Coeffs gradient(const ModelSpec& model, const TransportMap& W, const Dataset& data, LossKind loss,
                Exec exec = Exec::parallel);

struct LipschitzGap {
  double lhs = 0.0;  // max_x |f_W(x) - f_W'(x)|
  double rhs = 0.0;  // (1 + R D) ||W - W'||_{L2(rho_0)}
};

/// Sup-norm vs L2(rho_0) comparison for two clipped two-layer maps.
LipschitzGap lipschitz_gap(const ModelSpec& model, const TransportMap& W, const TransportMap& W_other,
                           const Eigen::MatrixXd& x_grid);

/// Squared MMD between two samples under exp(-|u-v|^2 / (2 h^2)), V-statistic.
double kernel_discrepancy(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q, double bandwidth);

/// mean |X_i - F_i|^2 + penalty * MMD^2(F, target) for pushed-forward points F.
double wasserstein_objective_values(const Eigen::MatrixXd& source, const Eigen::MatrixXd& pushed,
                                    const Eigen::MatrixXd& target, double penalty, double bandwidth = 1.0);

/// Derivative of wasserstein_objective_values w.r.t. the pushed points.
Eigen::MatrixXd wasserstein_objective_point_grad(const Eigen::MatrixXd& source, const Eigen::MatrixXd& pushed,
                                                 const Eigen::MatrixXd& target, double penalty,
                                                 double bandwidth = 1.0);

double wasserstein_objective(const ModelSpec& model, const TransportMap& W, const Eigen::MatrixXd& source,
                             const Eigen::MatrixXd& target, double penalty, double bandwidth = 1.0);

}  // namespace tmgld

#endif  // TMGLD_TRANSPORT_HPP
