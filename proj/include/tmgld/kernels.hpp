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

#ifndef TMGLD_KERNELS_HPP
#define TMGLD_KERNELS_HPP

// Data-parallel inner loops. Every kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::omp that performs the
// same floating-point operations in the same order per output element, so
// the two agree bitwise for any thread count.

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace tmgld {

enum class Activation { tanh, smoothed_relu };

enum class Exec { serial, parallel };

/// R tanh(v / R); R = +inf disables clipping.
double clip(double v, double R);
double clip_derivative(double v, double R);
Eigen::VectorXd clip(const Eigen::VectorXd& v, double R);

double activate(double u, Activation act);
double activate_derivative(double u, Activation act);

namespace kernels {

// Two-layer model at cloud resolution:
//   f(x) = sum_m p_m clip(V_m2) act(clip(V_m1)^T x)
// `values` is M x (d+1): columns 0..d-1 hold V_m1, column d holds V_m2.
struct TwoLayerArgs {
  const Eigen::MatrixXd& values;
  const Eigen::VectorXd& weights;
  double R;
  Activation act;
};

// ResNet at cloud resolution, T blocks:
//   h_{t+1} = h_t + sum_m p_m a_{m,t} act(clip(V_{m,t})^T h_t),   f = u^T h_T
// `values` is M x (d T), block t in columns [t d, (t+1) d).
struct ResNetArgs {
  const Eigen::MatrixXd& values;
  const Eigen::VectorXd& weights;
  const std::vector<Eigen::MatrixXd>& block_a;  // T matrices, M x d
  const Eigen::VectorXd& readout;
  double R;
  Activation act;
};

// Centered Gaussian with per-coordinate standard deviations `sd`; counts of
// samples inside {sum a_i z_i^2 <= 1}, {sum b_i z_i^2 <= 1} and both. Samples
// are drawn in fixed-size chunks with per-chunk seeds.
struct EllipsoidCounts {
  std::uint64_t n = 0;
  std::uint64_t in_a = 0;
  std::uint64_t in_b = 0;
  std::uint64_t in_ab = 0;
};

inline constexpr std::uint64_t kMonteCarloChunk = 1u << 14;

namespace serial {
Eigen::VectorXd two_layer_forward(const TwoLayerArgs& m, const Eigen::MatrixXd& X);
/// D(m, j) = sum_i dl_i d f(x_i) / d V_{m j}; includes the mass p_m.
Eigen::MatrixXd two_layer_value_grad(const TwoLayerArgs& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& dl);
Eigen::VectorXd resnet_forward(const ResNetArgs& m, const Eigen::MatrixXd& X);
Eigen::MatrixXd resnet_value_grad(const ResNetArgs& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& dl);
EllipsoidCounts ellipsoid_counts(const Eigen::VectorXd& sd, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                 std::uint64_t n_samples, std::uint64_t seed);
}  // namespace serial

namespace omp {
Eigen::VectorXd two_layer_forward(const TwoLayerArgs& m, const Eigen::MatrixXd& X);
Eigen::MatrixXd two_layer_value_grad(const TwoLayerArgs& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& dl);
Eigen::VectorXd resnet_forward(const ResNetArgs& m, const Eigen::MatrixXd& X);
Eigen::MatrixXd resnet_value_grad(const ResNetArgs& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& dl);
EllipsoidCounts ellipsoid_counts(const Eigen::VectorXd& sd, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                 std::uint64_t n_samples, std::uint64_t seed);
}  // namespace omp

inline Eigen::VectorXd two_layer_forward(Exec e, const TwoLayerArgs& m, const Eigen::MatrixXd& X) {
  return e == Exec::serial ? serial::two_layer_forward(m, X) : omp::two_layer_forward(m, X);
}
inline Eigen::MatrixXd two_layer_value_grad(Exec e, const TwoLayerArgs& m, const Eigen::MatrixXd& X,
                                            const Eigen::VectorXd& dl) {
  return e == Exec::serial ? serial::two_layer_value_grad(m, X, dl) : omp::two_layer_value_grad(m, X, dl);
}
inline Eigen::VectorXd resnet_forward(Exec e, const ResNetArgs& m, const Eigen::MatrixXd& X) {
  return e == Exec::serial ? serial::resnet_forward(m, X) : omp::resnet_forward(m, X);
}
inline Eigen::MatrixXd resnet_value_grad(Exec e, const ResNetArgs& m, const Eigen::MatrixXd& X,
                                         const Eigen::VectorXd& dl) {
  return e == Exec::serial ? serial::resnet_value_grad(m, X, dl) : omp::resnet_value_grad(m, X, dl);
}
inline EllipsoidCounts ellipsoid_counts(Exec e, const Eigen::VectorXd& sd, const Eigen::VectorXd& a,
                                        const Eigen::VectorXd& b, std::uint64_t n_samples, std::uint64_t seed) {
  return e == Exec::serial ? serial::ellipsoid_counts(sd, a, b, n_samples, seed)
                           : omp::ellipsoid_counts(sd, a, b, n_samples, seed);
}

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();
void set_threads(int n);

}  // namespace kernels
}  // namespace tmgld

#endif  // TMGLD_KERNELS_HPP
