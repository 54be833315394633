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

#ifndef TMGLD_KERNELS_DETAIL_HPP
#define TMGLD_KERNELS_DETAIL_HPP

// Per-element bodies shared by the serial and OpenMP kernels.

#include <cmath>
#include <vector>

#include "tmgld/kernels.hpp"
#include "tmgld/rng.hpp"

namespace tmgld::kernels::detail {

inline constexpr Eigen::Index kResNetChunk = 32;

inline Eigen::MatrixXd clipped_values(const TwoLayerArgs& m) {
  Eigen::MatrixXd c(m.values.rows(), m.values.cols());
  for (Eigen::Index p = 0; p < c.rows(); ++p)
    for (Eigen::Index j = 0; j < c.cols(); ++j) c(p, j) = clip(m.values(p, j), m.R);
  return c;
}

// `clipped` is clipped_values(m).
inline double two_layer_point(const TwoLayerArgs& m, const Eigen::MatrixXd& clipped, const Eigen::MatrixXd& X,
                              Eigen::Index i) {
  const Eigen::Index d = X.cols();
  double f = 0.0;
  for (Eigen::Index p = 0; p < clipped.rows(); ++p) {
    double z = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) z += clipped(p, j) * X(i, j);
    f += m.weights[p] * clipped(p, d) * activate(z, m.act);
  }
  return f;
}

// Same values as activate / activate_derivative, sharing one tanh.
inline void activate_with_derivative(double u, Activation act, double& value, double& slope) {
  if (act == Activation::tanh) {
    value = std::tanh(u);
    slope = 1.0 - value * value;
    return;
  }
  value = activate(u, act);
  slope = activate_derivative(u, act);
}

// Row p of the value gradient, summing over data in index order.
inline void two_layer_particle_grad(const TwoLayerArgs& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& dl,
                                    Eigen::Index p, Eigen::MatrixXd& out) {
  const Eigen::Index d = X.cols();
  Eigen::VectorXd w1(d), dclip1(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    w1[j] = clip(m.values(p, j), m.R);
    dclip1[j] = clip_derivative(m.values(p, j), m.R);
  }
  const double w2 = clip(m.values(p, d), m.R);
  const double dclip2 = clip_derivative(m.values(p, d), m.R);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(d + 1);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    if (dl[i] == 0.0) continue;
    double z = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) z += w1[j] * X(i, j);
    double value = 0.0, slope = 0.0;
    activate_with_derivative(z, m.act, value, slope);
    const double s = dl[i] * w2 * slope;
    for (Eigen::Index j = 0; j < d; ++j) acc[j] += s * X(i, j);
    acc[d] += dl[i] * value;
  }
  for (Eigen::Index j = 0; j < d; ++j) out(p, j) = m.weights[p] * acc[j] * dclip1[j];
  out(p, d) = m.weights[p] * acc[d] * dclip2;
}

struct ResNetCache {
  Eigen::MatrixXd clipped;  // M x dT
  Eigen::MatrixXd dclip;    // M x dT
};

inline ResNetCache resnet_cache(const ResNetArgs& m) {
  ResNetCache c{m.values, m.values};
  for (Eigen::Index p = 0; p < m.values.rows(); ++p)
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
      c.clipped(p, j) = clip(m.values(p, j), m.R);
      c.dclip(p, j) = clip_derivative(m.values(p, j), m.R);
    }
  return c;
}

// Forward pass for one input; fills hidden states h_0..h_T (columns) and
// pre-activations z (M x T).
inline double resnet_point(const ResNetArgs& m, const ResNetCache& c, const Eigen::Ref<const Eigen::VectorXd>& x,
                           Eigen::MatrixXd& h, Eigen::MatrixXd& z) {
  const Eigen::Index d = x.size();
  const Eigen::Index T = static_cast<Eigen::Index>(m.block_a.size());
  h.resize(d, T + 1);
  z.resize(m.values.rows(), T);
  h.col(0) = x;
  for (Eigen::Index t = 0; t < T; ++t) {
    h.col(t + 1) = h.col(t);
    for (Eigen::Index p = 0; p < m.values.rows(); ++p) {
      double zz = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) zz += c.clipped(p, t * d + j) * h(j, t);
      z(p, t) = zz;
      const double s = m.weights[p] * activate(zz, m.act);
      for (Eigen::Index j = 0; j < d; ++j) h(j, t + 1) += s * m.block_a[static_cast<std::size_t>(t)](p, j);
    }
  }
  return m.readout.dot(h.col(T));
}

// Adds dl * d f(x) / d V into `grad` (M x dT).
inline void resnet_point_grad(const ResNetArgs& m, const ResNetCache& c, const Eigen::MatrixXd& h,
                              const Eigen::MatrixXd& z, double dl, Eigen::MatrixXd& grad) {
  const Eigen::Index d = h.rows();
  const Eigen::Index T = static_cast<Eigen::Index>(m.block_a.size());
  Eigen::VectorXd g = dl * m.readout;  // d f / d h_{t+1}
  Eigen::VectorXd g_prev(d);
  for (Eigen::Index t = T - 1; t >= 0; --t) {
    g_prev = g;
    const Eigen::MatrixXd& A = m.block_a[static_cast<std::size_t>(t)];
    for (Eigen::Index p = 0; p < m.values.rows(); ++p) {
      double ag = 0.0;
      for (Eigen::Index j = 0; j < d; ++j) ag += A(p, j) * g[j];
      const double s = m.weights[p] * activate_derivative(z(p, t), m.act) * ag;
      for (Eigen::Index j = 0; j < d; ++j) {
        grad(p, t * d + j) += s * h(j, t) * c.dclip(p, t * d + j);
        g_prev[j] += s * c.clipped(p, t * d + j);
      }
    }
    g = g_prev;
  }
}

inline Eigen::MatrixXd resnet_chunk_grad(const ResNetArgs& m, const ResNetCache& c, const Eigen::MatrixXd& X,
                                         const Eigen::VectorXd& dl, Eigen::Index begin, Eigen::Index end) {
  Eigen::MatrixXd part = Eigen::MatrixXd::Zero(m.values.rows(), m.values.cols());
  Eigen::MatrixXd h, z;
  for (Eigen::Index i = begin; i < end; ++i) {
    if (dl[i] == 0.0) continue;
    resnet_point(m, c, X.row(i).transpose(), h, z);
    resnet_point_grad(m, c, h, z, dl[i], part);
  }
  return part;
}

inline EllipsoidCounts ellipsoid_chunk(const Eigen::VectorXd& sd, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                                       std::uint64_t count, std::uint64_t seed, std::uint64_t chunk) {
  RngStream rng(mix_seed(seed, chunk));
  EllipsoidCounts c;
  c.n = count;
  for (std::uint64_t s = 0; s < count; ++s) {
    double qa = 0.0, qb = 0.0;
    for (Eigen::Index i = 0; i < sd.size(); ++i) {
      const double zi = sd[i] * rng.normal();
      qa += a[i] * zi * zi;
      qb += b[i] * zi * zi;
    }
    const bool ia = qa <= 1.0, ib = qb <= 1.0;
    c.in_a += ia;
    c.in_b += ib;
    c.in_ab += ia && ib;
  }
  return c;
}

}  // namespace tmgld::kernels::detail

#endif  // TMGLD_KERNELS_DETAIL_HPP
