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

#ifndef TMGLD_LANGEVIN_HPP
#define TMGLD_LANGEVIN_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmgld/objective.hpp"
#include "tmgld/rng.hpp"
#include "tmgld/spectral.hpp"

namespace tmgld {

struct DynamicsConfig {
  double eta = 0.01;     // step size
  double beta = 1.0;     // inverse temperature; +inf disables the noise
  double lambda = 1.0;   // regularisation weight in A
  std::size_t n_modes = 0;  // noise truncation N; 0 = every retained mode
  std::size_t steps = 1;
  std::size_t burn_in = 0;
  std::size_t thin = 1;
  std::uint64_t seed = 0;
  std::size_t batch_size = 0;  // 0 = full-batch gradient

  bool noise_enabled() const { return std::isfinite(beta); }

  /// Throws std::invalid_argument; requires eta >= 0, lambda > 0, beta > eta.
  void validate() const;
};

struct ChainState {
  std::size_t step = 0;
  Coeffs coeffs;
  double last_grad_norm = 0.0;
};

// Raised when an update produces a non-finite coefficient. Carries the last
// state whose coefficients were all finite.
class ChainDiverged : public std::runtime_error {
 public:
  ChainDiverged(const std::string& what, ChainState last_finite)
      : std::runtime_error(what), last_finite_(std::move(last_finite)) {}
  const ChainState& last_finite() const { return last_finite_; }

 private:
  ChainState last_finite_;
};

/// One implicit-Euler step in coefficient space:
///   W_{k+1} = S_eta (W_k - eta grad L(W_k) + sqrt(2 eta / beta) eps_k),
/// eps_k i.i.d. N(0, 1) on modes below N, zero above.
ChainState gld_step(const ChainState& state, const DynamicsConfig& cfg, const Objective& objective, RngStream& rng);

struct TrajectoryRow {
  std::size_t step = 0;
  double train_loss = 0.0;
  double test_loss = 0.0;
  double norm_H = 0.0;
  double norm_HK = 0.0;
  double phi = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;

  /// Columns: step,train_loss,test_loss,norm_H,norm_HK,phi.
  void write_csv(std::ostream& os) const;
};

// Observables recorded along a chain. Missing callbacks record NaN (train
// loss defaults to the objective value).
struct Observables {
  std::function<double(const Coeffs&)> train_loss;
  std::function<double(const Coeffs&)> test_loss;
  std::function<double(const Coeffs&)> phi;
  bool record = true;  // false: only the visitor runs, no rows are kept
};

/// Called once per kept sample (after burn-in, every `thin` steps).
using SampleVisitor = std::function<void(const ChainState&)>;

/// Runs cfg.steps updates from `init`; records rows at steps burn_in + j thin
/// (j >= 1). Deterministic in (cfg.seed, inputs).
Trajectory run_chain(const DynamicsConfig& cfg, const Objective& objective, const Coeffs& init,
                     const Observables& observables = {}, const SampleVisitor& visit = {},
                     ChainState* final_state = nullptr);

/// Continues a chain from a state and an explicit RNG stream, up to cfg.steps total steps.
Trajectory resume_chain(const DynamicsConfig& cfg, const Objective& objective, ChainState state, RngStream& rng,
                        const Observables& observables = {}, const SampleVisitor& visit = {},
                        ChainState* final_state = nullptr);

/// Auxiliary OU step Z_{n+1} = S_eta Z_n + sqrt(eta / beta) S_eta eps_n on one output coordinate.
Eigen::VectorXd ou_step(const Eigen::VectorXd& z, const DynamicsConfig& cfg, const EigenSequence& eigen,
                        RngStream& rng);

struct OuMoment {
  double exact = 0.0;        // stationary E|Z|^2 over the retained modes
  double prior_bound = 0.0;  // c_mu / (beta lambda)
};

OuMoment ou_stationary_moment(const DynamicsConfig& cfg, const EigenSequence& eigen);

/// E|Z_n|^2 from Z_0 = 0: (eta/beta) sum_k sum_{j=1..n} s_k^{2j}.
double ou_transient_moment(const DynamicsConfig& cfg, const EigenSequence& eigen, std::size_t n);

/// Stationary variance of mode k of the zero-gradient GLD chain:
/// (2 eta / beta) s^2 / (1 - s^2), s = 1 / (1 + eta lambda / mu_k).
double gld_zero_gradient_variance(const DynamicsConfig& cfg, double mu_k);

// Versioned structured-text checkpoint (JSON) for resuming a chain.
struct Checkpoint {
  static constexpr int kVersion = 1;
  DynamicsConfig cfg;
  ChainState state;
  std::string rng_state;
};

void save_checkpoint(std::ostream& os, const Checkpoint& cp);
Checkpoint load_checkpoint(std::istream& is);

}  // namespace tmgld

#endif  // TMGLD_LANGEVIN_HPP
