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

#ifndef TMGLD_CLOUD_HPP
#define TMGLD_CLOUD_HPP

#include <cstddef>

#include <Eigen/Core>

#include "tmgld/rng.hpp"

namespace tmgld {

enum class CloudMode { finite_width, monte_carlo };

// Discrete representation of the initial weight distribution rho_0. In
// finite-width mode the cloud is the network itself; in Monte-Carlo mode it
// is an i.i.d. draw from a declared rho_0 that stays fixed for a run.
struct ParticleCloud {
  Eigen::MatrixXd w;        // M x d first-layer initial weights
  Eigen::VectorXd a;        // M second-layer initial values
  Eigen::VectorXd weights;  // M masses, sum to 1
  CloudMode mode = CloudMode::finite_width;

  std::size_t size() const { return static_cast<std::size_t>(w.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(w.cols()); }

  /// Points (w_m, a_m) as rows of an M x (d+1) matrix: the domain of a two-layer map.
  Eigen::MatrixXd joint_points() const;

  /// Throws std::invalid_argument on shape mismatch, negative mass or sum != 1 (1e-12).
  void validate() const;
};

/// Uniform-mass cloud built from explicit particles (finite-width network).
ParticleCloud make_finite_width_cloud(Eigen::MatrixXd w, Eigen::VectorXd a);

/// rho_0 = N(0, w_scale^2 I_d) x Uniform[-a_range, a_range], drawn once.
ParticleCloud sample_cloud(std::size_t M, std::size_t d, RngStream& rng, double w_scale = 1.0,
                           double a_range = 1.0);

}  // namespace tmgld

#endif  // TMGLD_CLOUD_HPP
