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

#ifndef TMGLD_EXPERIMENTS_INTERNAL_HPP
#define TMGLD_EXPERIMENTS_INTERNAL_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "tmgld/analysis.hpp"
#include "tmgld/experiments.hpp"
#include "tmgld/langevin.hpp"
#include "tmgld/objective.hpp"
#include "tmgld/spectral.hpp"
#include "tmgld/transport.hpp"

namespace tmgld::experiments::detail {

/// Writes one CSV under cfg.output_dir, preceded by a provenance comment line.
void write_table(const ExperimentConfig& cfg, const Table& t);

Criterion criterion(int id, std::string name, bool passed, std::string measured, std::string threshold);
Table& add_table(ExperimentResult& result, std::string file, std::vector<std::string> header);

/// DynamicsConfig from the `dynamics` section.
DynamicsConfig dynamics_from(const Params& p);

/// Deterministic per-purpose seed derived from the run seed.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t purpose, std::uint64_t index = 0);

BasisPtr cosine_basis(std::size_t n_modes, std::size_t dim_in, double c_mu);

/// n points uniform in the d-ball of the given radius.
Eigen::MatrixXd ball_points(std::size_t n, std::size_t d, double radius, RngStream& rng);

/// radii x angles polar grid inside the disc of radius D (d = 2).
Eigen::MatrixXd polar_grid(std::size_t radii, std::size_t angles, double D);

/// Random-direction perturbation of the coefficients with the given Frobenius scale.
Coeffs perturbation(const Coeffs& like, double scale, RngStream& rng);

struct TwoLayerSetup {
  ModelSpec model;
  BasisPtr basis;
  Coeffs identity;  // W_0 projected on the retained modes
};

/// Clipped two-layer model over a rho_0 = N(0, I) x U[-1, 1] cloud with a gram basis.
TwoLayerSetup two_layer_setup(std::size_t M, std::size_t d, std::size_t n_modes, double bandwidth, double R, double D,
                              RngStream& rng);

/// i.i.d. Uniform[-C, C] noise.
Eigen::VectorXd bounded_noise(std::size_t n, double C, RngStream& rng);

double rel_error(const Coeffs& a, const Coeffs& b);

// Per-preset registry entries.
PresetInfo posterior_validate_preset();
PresetInfo ou_moment_preset();
PresetInfo stepsize_bias_preset();
PresetInfo ergodicity_preset();
PresetInfo grad_check_preset();
PresetInfo lipschitz_suite_preset();
PresetInfo bernstein_suite_preset();
PresetInfo correlation_suite_preset();
PresetInfo regression_rate_preset();
PresetInfo classification_rate_preset();
PresetInfo finite_width_demo_preset();
PresetInfo wasserstein_demo_preset();

}  // namespace tmgld::experiments::detail

#endif  // TMGLD_EXPERIMENTS_INTERNAL_HPP
