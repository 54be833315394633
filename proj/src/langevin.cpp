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

#include "tmgld/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace tmgld {

void DynamicsConfig::validate() const {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("dynamics: eta must be finite and >= 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("dynamics: lambda must be positive");
  if (!(beta > eta)) throw std::invalid_argument("dynamics: beta must exceed eta");
  if (thin == 0) throw std::invalid_argument("dynamics: thin must be >= 1");
}

namespace {

bool all_finite(const Coeffs& c) { return c.allFinite(); }

std::size_t noise_modes(const DynamicsConfig& cfg, const Coeffs& coeffs) {
  const auto rows = static_cast<std::size_t>(coeffs.rows());
  return cfg.n_modes == 0 ? rows : std::min(cfg.n_modes, rows);
}

}  // namespace

ChainState gld_step(const ChainState& state, const DynamicsConfig& cfg, const Objective& objective, RngStream& rng) {
  ChainState next;
  next.step = state.step + 1;
  if (cfg.eta == 0.0) {
    next.coeffs = state.coeffs;
    next.last_grad_norm = state.last_grad_norm;
    return next;
  }
  const Coeffs grad =
      cfg.batch_size > 0 ? objective.stochastic_gradient(state.coeffs, rng, cfg.batch_size) : objective.gradient(state.coeffs);
  next.last_grad_norm = grad.norm();
  next.coeffs = state.coeffs - cfg.eta * grad;
  if (cfg.noise_enabled()) {
    const auto N = static_cast<Eigen::Index>(noise_modes(cfg, state.coeffs));
    Coeffs noise(N, state.coeffs.cols());
    rng.fill_normal(noise);
    next.coeffs.topRows(N) += std::sqrt(2.0 * cfg.eta / cfg.beta) * noise;
  }
  apply_resolvent_inplace(next.coeffs, cfg.eta, cfg.lambda, objective.eigen());
  if (!all_finite(next.coeffs))
    throw ChainDiverged("chain diverged at step " + std::to_string(next.step), state);
  return next;
}

void Trajectory::write_csv(std::ostream& os) const {
  os << "step,train_loss,test_loss,norm_H,norm_HK,phi\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g,%.10g,%.10g,%.10g\n", r.step, r.train_loss, r.test_loss, r.norm_H,
                  r.norm_HK, r.phi);
    os << buf;
  }
}

Trajectory resume_chain(const DynamicsConfig& cfg, const Objective& objective, ChainState state, RngStream& rng,
                        const Observables& observables, const SampleVisitor& visit, ChainState* final_state) {
  cfg.validate();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Trajectory traj;
  while (state.step < cfg.steps) {
    state = gld_step(state, cfg, objective, rng);
    if (state.step <= cfg.burn_in || (state.step - cfg.burn_in) % cfg.thin != 0) continue;
    if (visit) visit(state);
    if (!observables.record) continue;
    TrajectoryRow row;
    row.step = state.step;
    row.train_loss = observables.train_loss ? observables.train_loss(state.coeffs) : objective.value(state.coeffs);
    row.test_loss = observables.test_loss ? observables.test_loss(state.coeffs) : nan;
    row.norm_H = state.coeffs.norm();
    row.norm_HK = hk_norm(state.coeffs, objective.eigen());
    row.phi = observables.phi ? observables.phi(state.coeffs) : nan;
    traj.rows.push_back(row);
  }
  if (final_state) *final_state = state;
  return traj;
}

Trajectory run_chain(const DynamicsConfig& cfg, const Objective& objective, const Coeffs& init,
                     const Observables& observables, const SampleVisitor& visit, ChainState* final_state) {
  if (cfg.steps == 0) throw std::invalid_argument("run_chain: steps must be >= 1");
  if (init.rows() != static_cast<Eigen::Index>(objective.n_modes()) ||
      init.cols() != static_cast<Eigen::Index>(objective.dim_out()))
    throw std::invalid_argument("run_chain: initial coefficients have the wrong shape");
  RngStream rng(cfg.seed);
  ChainState state;
  state.coeffs = init;
  return resume_chain(cfg, objective, std::move(state), rng, observables, visit, final_state);
}

Eigen::VectorXd ou_step(const Eigen::VectorXd& z, const DynamicsConfig& cfg, const EigenSequence& eigen,
                        RngStream& rng) {
  Coeffs next = z;
  if (cfg.noise_enabled()) {
    const auto N = static_cast<Eigen::Index>(noise_modes(cfg, next));
    const double amp = std::sqrt(cfg.eta / cfg.beta);
    for (Eigen::Index k = 0; k < N; ++k) next(k, 0) += amp * rng.normal();
  }
  apply_resolvent_inplace(next, cfg.eta, cfg.lambda, eigen);
  return next.col(0);
}

namespace {

double contraction(const DynamicsConfig& cfg, double mu) { return 1.0 / (1.0 + cfg.eta * cfg.lambda / mu); }

std::size_t retained(const DynamicsConfig& cfg, const EigenSequence& eigen) {
  return cfg.n_modes == 0 ? eigen.size() : std::min(cfg.n_modes, eigen.size());
}

}  // namespace

OuMoment ou_stationary_moment(const DynamicsConfig& cfg, const EigenSequence& eigen) {
  cfg.validate();
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("ou_stationary_moment: eta must be positive");
  OuMoment out;
  for (std::size_t k = 0; k < retained(cfg, eigen); ++k) {
    const double s = contraction(cfg, eigen.mu[static_cast<Eigen::Index>(k)]);
    out.exact += s * s / (1.0 - s * s);
  }
  out.exact *= cfg.eta / cfg.beta;
  out.prior_bound = eigen.c_mu / (cfg.beta * cfg.lambda);
  return out;
}

double ou_transient_moment(const DynamicsConfig& cfg, const EigenSequence& eigen, std::size_t n) {
  double total = 0.0;
  for (std::size_t k = 0; k < retained(cfg, eigen); ++k) {
    const double s2 = std::pow(contraction(cfg, eigen.mu[static_cast<Eigen::Index>(k)]), 2);
    total += (s2 - std::pow(s2, static_cast<double>(n + 1))) / (1.0 - s2);
  }
  return cfg.eta / cfg.beta * total;
}

double gld_zero_gradient_variance(const DynamicsConfig& cfg, double mu_k) {
  const double s = contraction(cfg, mu_k);
  return 2.0 * cfg.eta / cfg.beta * s * s / (1.0 - s * s);
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

void save_checkpoint(std::ostream& os, const Checkpoint& cp) {
  nlohmann::json j;
  j["version"] = Checkpoint::kVersion;
  j["config"] = {{"eta", cp.cfg.eta},           {"beta", finite_or_null(cp.cfg.beta)},
                 {"lambda", cp.cfg.lambda},     {"n_modes", cp.cfg.n_modes},
                 {"steps", cp.cfg.steps},       {"burn_in", cp.cfg.burn_in},
                 {"thin", cp.cfg.thin},         {"seed", cp.cfg.seed},
                 {"batch_size", cp.cfg.batch_size}};
  std::vector<double> flat(cp.state.coeffs.data(), cp.state.coeffs.data() + cp.state.coeffs.size());
  j["state"] = {{"step", cp.state.step},
                {"rows", cp.state.coeffs.rows()},
                {"cols", cp.state.coeffs.cols()},
                {"coeffs_col_major", flat},
                {"last_grad_norm", cp.state.last_grad_norm}};
  j["rng_state"] = cp.rng_state;
  os << j.dump(1) << '\n';
}

Checkpoint load_checkpoint(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("checkpoint: ") + e.what());
  }
  if (j.value("version", -1) != Checkpoint::kVersion) throw std::invalid_argument("checkpoint: unsupported version");
  Checkpoint cp;
  const auto& c = j.at("config");
  cp.cfg.eta = c.at("eta");
  cp.cfg.beta = c.at("beta").is_null() ? std::numeric_limits<double>::infinity() : c.at("beta").get<double>();
  cp.cfg.lambda = c.at("lambda");
  cp.cfg.n_modes = c.at("n_modes");
  cp.cfg.steps = c.at("steps");
  cp.cfg.burn_in = c.at("burn_in");
  cp.cfg.thin = c.at("thin");
  cp.cfg.seed = c.at("seed");
  cp.cfg.batch_size = c.at("batch_size");
  const auto& s = j.at("state");
  cp.state.step = s.at("step");
  const auto rows = s.at("rows").get<Eigen::Index>();
  const auto cols = s.at("cols").get<Eigen::Index>();
  const auto flat = s.at("coeffs_col_major").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(flat.size()) != rows * cols) throw std::invalid_argument("checkpoint: coefficient size");
  cp.state.coeffs = Eigen::Map<const Eigen::MatrixXd>(flat.data(), rows, cols);
  cp.state.last_grad_norm = s.at("last_grad_norm");
  cp.rng_state = j.at("rng_state");
  return cp;
}

}  // namespace tmgld
