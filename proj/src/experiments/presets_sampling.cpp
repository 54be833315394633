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

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "internal.hpp"
#include "tmgld/loss_audit.hpp"
#include "tmgld/oracle.hpp"
#include "tmgld/stats.hpp"

namespace tmgld::experiments::detail {

using nlohmann::json;

namespace {

// Linear-Gaussian regression on [0,1]: y = sum_k c_k e_k(x) + N(0, noise^2).
Dataset linear_teacher_data(const SpectralBasis& basis, const std::vector<double>& teacher, std::size_t n,
                            double noise, RngStream& rng) {
  Dataset data;
  data.X.resize(static_cast<Eigen::Index>(n), 1);
  for (Eigen::Index i = 0; i < data.X.rows(); ++i) data.X(i, 0) = rng.uniform();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.n_modes));
  for (std::size_t k = 0; k < std::min(teacher.size(), basis.n_modes); ++k) c[static_cast<Eigen::Index>(k)] = teacher[k];
  data.y = basis.evaluate_rows(data.X) * c;
  for (auto& v : data.y) v += noise * rng.normal();
  return data;
}

const std::vector<double> kTeacher = {1.0, -0.8, 0.6, -0.4, 0.3, -0.2, 0.1, -0.05};

json linear_defaults(double eta, double beta, double lambda, std::uint64_t burn_in, std::uint64_t steps) {
  return {{"dynamics", {{"eta", eta}, {"beta", beta}, {"lambda", lambda}, {"burn_in", burn_in}, {"steps", steps}}},
          {"model", {{"n_modes", 8}, {"c_mu", 1.0}, {"teacher", kTeacher}}},
          {"loss", {{"kind", "squared"}}},
          {"data", {{"n", 50}, {"noise", 0.1}}},
          {"experiment", json::object()}};
}

struct LinearProblem {
  BasisPtr basis;
  Dataset data;
  Eigen::MatrixXd features;
  std::unique_ptr<SupervisedObjective> objective;
};

LinearProblem linear_problem(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  if (p.text("loss.kind") != "squared") throw std::invalid_argument("linear-Gaussian presets need loss.kind = squared");
  LinearProblem lp;
  lp.basis = cosine_basis(p.count("model.n_modes"), 1, p.num("model.c_mu"));
  RngStream rng(sub_seed(cfg.seed, 0));
  lp.data = linear_teacher_data(*lp.basis, p.list("model.teacher"), p.count("data.n"), p.num("data.noise"), rng);
  lp.features = lp.basis->evaluate_rows(lp.data.X);
  lp.objective =
      std::make_unique<SupervisedObjective>(make_identity_model(1), lp.basis, lp.data, LossKind::squared);
  return lp;
}

AuditReport linear_audit(const ExperimentConfig& cfg) {
  const auto lp = linear_problem(cfg);
  AuditOptions opts;
  opts.seed = sub_seed(cfg.seed, 9);
  return assumption_audit(*lp.objective, opts);
}

// ---------------------------------------------------------------------------

ExperimentResult run_posterior_validate(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  const auto lp = linear_problem(cfg);
  DynamicsConfig dyn = dynamics_from(p);
  dyn.seed = sub_seed(cfg.seed, 1);
  const std::size_t N = lp.basis->n_modes;
  const std::size_t kept = (dyn.steps - std::min(dyn.steps, dyn.burn_in)) / dyn.thin;
  const std::size_t batches = p.count("experiment.batches");
  if (kept < batches) throw std::invalid_argument("posterior-validate: fewer kept samples than batches");

  std::vector<BatchAccumulator> acc(N, BatchAccumulator(kept / batches));
  Observables quiet;
  quiet.record = false;
  run_chain(dyn, *lp.objective, Coeffs::Zero(static_cast<Eigen::Index>(N), 1), quiet, [&](const ChainState& s) {
    for (std::size_t k = 0; k < N; ++k) acc[k].push(s.coeffs(static_cast<Eigen::Index>(k), 0));
  });

  const auto post = conjugate_posterior(lp.features, lp.data.y, dyn.beta, dyn.lambda, lp.basis->eigen);
  ExperimentResult r;
  r.preset = cfg.preset;
  auto& t = add_table(r, "modes.csv", {"mode", "chain_mean", "posterior_mean", "std_error", "z"});
  Eigen::VectorXd chain_mean(static_cast<Eigen::Index>(N));
  double max_z = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const auto bm = acc[k].result();
    const auto ki = static_cast<Eigen::Index>(k);
    chain_mean[ki] = bm.mean;
    const double z = (bm.mean - post.mean(ki, 0)) / bm.std_error;
    max_z = std::max(max_z, std::abs(z));
    t.rows.push_back({std::to_string(k), format_number(bm.mean), format_number(post.mean(ki, 0)),
                      format_number(bm.std_error), format_number(z)});
  }
  const double rel = (chain_mean - post.mean.col(0)).norm() / post.mean.col(0).norm();
  const double z_max = p.num("experiment.z_max"), rel_tol = p.num("experiment.rel_tol");
  r.criteria.push_back(criterion(1, "chain mean matches the conjugate posterior mean", max_z <= z_max && rel <= rel_tol,
                                 "max|z| = " + format_number(max_z) + ", relative error = " + format_number(rel),
                                 "max|z| <= " + format_number(z_max) + " and relative error <= " + format_number(rel_tol)));
  r.metrics = {{"relative_error", rel}, {"max_abs_z", max_z}};
  return r;
}

PresetInfo make_posterior_validate() {
  PresetInfo info;
  info.name = "posterior-validate";
  info.summary = "GLD chain mean against the exact Gaussian posterior of a linear model";
  info.criteria = {1};
  info.defaults = [] {
    json d = linear_defaults(1e-3, 50.0, 0.02, 20000, 220000);
    d["experiment"] = {{"batches", 50}, {"z_max", 3.0}, {"rel_tol", 0.05}};
    return d;
  };
  info.run = run_posterior_validate;
  info.audit = linear_audit;
  return info;
}

// ---------------------------------------------------------------------------

ExperimentResult run_ou_moment(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  const auto etas = p.list("experiment.etas"), betas = p.list("experiment.betas"), lambdas = p.list("experiment.lambdas");
  if (etas.size() != betas.size() || etas.size() != lambdas.size())
    throw std::invalid_argument("ou-moment: etas, betas and lambdas must have equal length");
  const auto eigen = make_eigen_sequence(p.num("model.c_mu"), 2.0, p.count("model.n_modes"));
  const std::size_t steps = p.count("dynamics.steps"), burn_in = p.count("dynamics.burn_in");
  const std::size_t batches = p.count("experiment.batches");
  const double z_max = p.num("experiment.z_max");

  ExperimentResult r;
  r.preset = cfg.preset;
  auto& t = add_table(r, "ou.csv", {"config", "eta", "beta", "lambda", "mc_moment", "std_error", "exact", "bound", "z"});
  bool all_ok = true;
  double worst_z = 0.0, worst_ratio = 0.0;
  for (std::size_t c = 0; c < etas.size(); ++c) {
    DynamicsConfig dyn;
    dyn.eta = etas[c];
    dyn.beta = betas[c];
    dyn.lambda = lambdas[c];
    dyn.validate();
    RngStream rng(sub_seed(cfg.seed, 2, c));
    Eigen::VectorXd z = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(eigen.size()));
    for (std::size_t i = 0; i < burn_in; ++i) z = ou_step(z, dyn, eigen, rng);
    BatchAccumulator acc(std::max<std::size_t>(1, steps / batches));
    for (std::size_t i = 0; i < steps; ++i) {
      z = ou_step(z, dyn, eigen, rng);
      acc.push(z.squaredNorm());
    }
    const auto bm = acc.result();
    const auto m = ou_stationary_moment(dyn, eigen);
    const double zs = (bm.mean - m.exact) / bm.std_error;
    worst_z = std::max(worst_z, std::abs(zs));
    worst_ratio = std::max(worst_ratio, m.exact / m.prior_bound);
    all_ok = all_ok && std::abs(zs) <= z_max && m.exact <= m.prior_bound;
    t.rows.push_back({std::to_string(c), format_number(dyn.eta), format_number(dyn.beta), format_number(dyn.lambda),
                      format_number(bm.mean), format_number(bm.std_error), format_number(m.exact),
                      format_number(m.prior_bound), format_number(zs)});
  }
  r.criteria.push_back(criterion(2, "OU stationary moment: Monte Carlo vs exact, exact under c_mu/(beta lambda)", all_ok,
                                 std::to_string(etas.size()) + " configs, max|z| = " + format_number(worst_z) +
                                     ", max exact/bound = " + format_number(worst_ratio),
                                 "|z| <= " + format_number(z_max) + " and exact/bound <= 1 in every config"));
  r.metrics = {{"max_abs_z", worst_z}, {"max_exact_over_bound", worst_ratio}};
  return r;
}

PresetInfo make_ou_moment() {
  PresetInfo info;
  info.name = "ou-moment";
  info.summary = "Stationary second moment of the auxiliary OU chain, Monte Carlo against closed form";
  info.criteria = {2};
  info.defaults = [] {
    return json{{"dynamics", {{"steps", 200000}, {"burn_in", 2000}}},
                {"model", {{"n_modes", 16}, {"c_mu", 1.0}}},
                {"experiment",
                 {{"etas", {0.1, 0.2, 0.5, 1.0, 0.1, 0.25, 0.5, 0.05, 0.1, 2.0}},
                  {"betas", {1.0, 1.0, 2.0, 5.0, 10.0, 4.0, 1.0, 2.0, 3.0, 10.0}},
                  {"lambdas", {1.0, 1.0, 1.0, 1.0, 2.0, 0.5, 0.5, 4.0, 1.5, 0.1}},
                  {"batches", 100},
                  {"z_max", 3.0}}}};
  };
  info.run = run_ou_moment;
  return info;
}

// ---------------------------------------------------------------------------

// Stationary E|W|^2 of the discrete linear-Gaussian chain, from the Lyapunov
// equation Sigma = M Sigma M^T + Q solved by doubling.
double exact_linear_second_moment(const Eigen::MatrixXd& features, const Eigen::VectorXd& y,
                                  const DynamicsConfig& dyn, const EigenSequence& eigen) {
  const auto N = static_cast<Eigen::Index>(eigen.size());
  const double n = static_cast<double>(features.rows());
  const Eigen::MatrixXd H = (2.0 / n) * features.transpose() * features;
  Eigen::VectorXd s(N);
  for (Eigen::Index k = 0; k < N; ++k) s[k] = 1.0 / (1.0 + dyn.eta * dyn.lambda / eigen.mu[k]);
  Eigen::MatrixXd M = s.asDiagonal() * (Eigen::MatrixXd::Identity(N, N) - dyn.eta * H);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(N, N);
  const Eigen::Index noisy = dyn.n_modes == 0 ? N : std::min<Eigen::Index>(N, static_cast<Eigen::Index>(dyn.n_modes));
  for (Eigen::Index k = 0; k < noisy; ++k) sigma(k, k) = 2.0 * dyn.eta / dyn.beta * s[k] * s[k];
  for (int it = 0; it < 200; ++it) {
    const Eigen::MatrixXd next = sigma + M * sigma * M.transpose();
    const double change = (next - sigma).norm();
    sigma = next;
    M = M * M;
    if (change <= 1e-15 * sigma.norm()) break;
  }
  const auto post = conjugate_posterior(features, y, dyn.beta, dyn.lambda, eigen);
  return sigma.trace() + post.mean.squaredNorm();
}

ExperimentResult run_stepsize_bias(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  const auto lp = linear_problem(cfg);
  const auto etas = p.list("experiment.etas");
  if (etas.empty()) throw std::invalid_argument("stepsize-bias: etas is empty");
  const double eta_ref = *std::min_element(etas.begin(), etas.end()) / p.num("experiment.ref_divisor");
  const double horizon = p.num("experiment.horizon"), burn_time = p.num("experiment.burn_time");
  const std::size_t batches = p.count("experiment.batches");
  const std::size_t N = lp.basis->n_modes;

  auto second_moment = [&](double eta, std::uint64_t stream) {
    DynamicsConfig dyn = dynamics_from(p);
    dyn.eta = eta;
    dyn.seed = sub_seed(cfg.seed, 3, stream);
    dyn.burn_in = static_cast<std::size_t>(std::ceil(burn_time / eta));
    const auto kept = static_cast<std::size_t>(std::ceil(horizon / eta));
    dyn.steps = dyn.burn_in + kept;
    BatchAccumulator acc(std::max<std::size_t>(1, kept / batches));
    Observables quiet;
    quiet.record = false;
    run_chain(dyn, *lp.objective, Coeffs::Zero(static_cast<Eigen::Index>(N), 1), quiet,
              [&](const ChainState& s) { acc.push(s.coeffs.squaredNorm()); });
    return std::pair{acc.result(), exact_linear_second_moment(lp.features, lp.data.y, dyn, lp.basis->eigen)};
  };

  const auto [ref, ref_exact] = second_moment(eta_ref, 0);
  ExperimentResult r;
  r.preset = cfg.preset;
  auto& t = add_table(r, "bias.csv", {"eta", "moment", "std_error", "bias", "bias_std_error", "exact_moment", "exact_bias"});
  t.rows.push_back({format_number(eta_ref), format_number(ref.mean), format_number(ref.std_error), "0", "0",
                    format_number(ref_exact), "0"});
  std::vector<double> biases, exact_biases;
  double worst_snr = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < etas.size(); ++i) {
    const auto [m, exact] = second_moment(etas[i], i + 1);
    const double bias = std::abs(m.mean - ref.mean);
    const double se = std::hypot(m.std_error, ref.std_error);
    biases.push_back(bias);
    exact_biases.push_back(std::abs(exact - ref_exact));
    worst_snr = std::min(worst_snr, bias / se);
    t.rows.push_back({format_number(etas[i]), format_number(m.mean), format_number(m.std_error), format_number(bias),
                      format_number(se), format_number(exact), format_number(exact_biases.back())});
  }
  const double lo = p.num("experiment.slope_lo"), hi = p.num("experiment.slope_hi");
  r.metrics.push_back({"bias", biases.front()});
  if (etas.size() >= 3) {
    const auto fit = fit_stepsize_bias(etas, biases);
    const auto exact_fit = fit_stepsize_bias(etas, exact_biases);
    r.criteria.push_back(criterion(3, "log-log slope of the step-size bias of E|W|^2", fit.slope >= lo && fit.slope <= hi,
                                   "slope = " + format_number(fit.slope) + " (r^2 = " + format_number(fit.r_squared) +
                                       ", min bias/stderr = " + format_number(worst_snr) + ")",
                                   "slope in [" + format_number(lo) + ", " + format_number(hi) + "]"));
    r.criteria.push_back(criterion(0, "Lyapunov-exact bias slope lies in the same band",
                                   exact_fit.slope >= lo && exact_fit.slope <= hi,
                                   "exact slope = " + format_number(exact_fit.slope), "same band as the Monte Carlo slope"));
    r.metrics.push_back({"slope", fit.slope});
    r.metrics.push_back({"exact_slope", exact_fit.slope});
  } else {
    r.notes.push_back("fewer than 3 step sizes: no slope fitted");
  }
  r.notes.push_back("reference chain step size " + format_number(eta_ref));
  return r;
}

PresetInfo make_stepsize_bias() {
  PresetInfo info;
  info.name = "stepsize-bias";
  info.summary = "Order of the step-size bias of E|W|^2 against a small-step reference chain";
  info.criteria = {3};
  info.defaults = [] {
    json d = linear_defaults(0.1, 1.0, 1.0, 0, 1);
    d["dynamics"].erase("burn_in");
    d["dynamics"].erase("steps");
    d["dynamics"].erase("eta");
    d["experiment"] = {{"etas", {0.2, 0.1, 0.05, 0.025}},
                       {"ref_divisor", 8.0},
                       {"horizon", 200000.0},
                       {"burn_time", 50.0},
                       {"batches", 50},
                       {"slope_lo", 0.4},
                       {"slope_hi", 1.2}};
    return d;
  };
  info.run = run_stepsize_bias;
  info.audit = linear_audit;
  return info;
}

// ---------------------------------------------------------------------------

struct TwoLayerTask {
  TwoLayerSetup setup;
  Dataset data;
  Coeffs teacher;
};

TwoLayerTask ergodicity_task(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  RngStream rng(sub_seed(cfg.seed, 0));
  TwoLayerTask task;
  task.setup = two_layer_setup(p.count("model.M"), p.count("model.d"), p.count("model.n_modes"), p.num("model.bandwidth"),
                               p.num("model.R"), p.num("model.D"), rng);
  task.teacher = task.setup.identity + perturbation(task.setup.identity, p.num("model.teacher_scale"), rng);
  const std::size_t n = p.count("data.n");
  task.data.X = ball_points(n, p.count("model.d"), p.num("model.D"), rng);
  task.data.y = predict(task.setup.model, {task.teacher, task.setup.basis, 0.0}, task.data.X) +
                bounded_noise(n, p.num("data.noise_C"), rng);
  return task;
}

ExperimentResult run_ergodicity(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  const auto task = ergodicity_task(cfg);
  const auto& model = task.setup.model;
  SupervisedObjective obj(model, task.setup.basis, task.data, LossKind::squared);
  DynamicsConfig dyn = dynamics_from(p);
  dyn.burn_in = 0;
  dyn.thin = 1;
  const std::size_t pairs = p.count("experiment.pairs");
  const double init_scale = p.num("experiment.init_scale");

  RngStream rng(sub_seed(cfg.seed, 4));
  const Eigen::MatrixXd x0 = ball_points(1, p.count("model.d"), 0.5 * p.num("model.D"), rng);
  auto phi = [&](const Coeffs& c) { return std::tanh(obj.predict(c, x0)[0]); };

  std::vector<double> gap(dyn.steps + 1, 0.0);
  Observables quiet;
  quiet.record = false;
  for (std::size_t j = 0; j < pairs; ++j) {
    const Coeffs P = perturbation(task.setup.identity, init_scale, rng);
    dyn.seed = sub_seed(cfg.seed, 5, j);  // shared by both chains: synchronous coupling
    std::vector<double> a(dyn.steps + 1), b(dyn.steps + 1);
    const Coeffs ia = task.setup.identity + P, ib = task.setup.identity - P;
    a[0] = phi(ia);
    b[0] = phi(ib);
    run_chain(dyn, obj, ia, quiet, [&](const ChainState& s) { a[s.step] = phi(s.coeffs); });
    run_chain(dyn, obj, ib, quiet, [&](const ChainState& s) { b[s.step] = phi(s.coeffs); });
    for (std::size_t k = 0; k <= dyn.steps; ++k) gap[k] += std::abs(a[k] - b[k]) / static_cast<double>(pairs);
  }

  const double floor = p.num("experiment.floor_rel") * gap[0];
  std::vector<double> ks, gs;
  ExperimentResult r;
  r.preset = cfg.preset;
  auto& t = add_table(r, "gap.csv", {"step", "mean_abs_gap", "in_fit"});
  bool window_open = true;
  for (std::size_t k = 0; k <= dyn.steps; ++k) {
    window_open = window_open && gap[k] > floor;
    if (window_open) {
      ks.push_back(static_cast<double>(k));
      gs.push_back(gap[k]);
    }
    t.rows.push_back({std::to_string(k), format_number(gap[k]), window_open ? "1" : "0"});
  }
  const double r2_min = p.num("experiment.r2_min");
  if (ks.size() >= 4) {
    const auto fit = fit_geometric_decay(ks, gs, dyn.eta);
    r.criteria.push_back(criterion(4, "coupled-chain gap decays geometrically", fit.r_squared >= r2_min && fit.rate > 0.0,
                                   "rate = " + format_number(fit.rate) + ", r^2 = " + format_number(fit.r_squared) +
                                       " over " + std::to_string(ks.size()) + " steps",
                                   "r^2 >= " + format_number(r2_min) + " and rate > 0"));
    r.metrics = {{"rate", fit.rate}, {"r_squared", fit.r_squared}};
    try {
      SmoothnessAuditOptions so;
      so.seed = sub_seed(cfg.seed, 9);
      const auto bounds = smoothness_audit(obj, so);
      const auto& mu = task.setup.basis->eigen.mu;
      MixingInputs in;
      in.eta = dyn.eta;
      in.beta = dyn.beta;
      in.lambda = dyn.lambda;
      in.mu_0 = mu[0];
      in.mu_1 = mu.size() > 1 ? mu[1] : mu[0];
      in.c_mu = task.setup.basis->eigen.c_mu;
      in.B = bounds.B;
      in.R_bar = clipped_loss_range(p.num("model.R"), p.num("data.noise_C"));
      const auto c = mixing_constants(in);
      r.notes.push_back("worst-case rate Lambda*_eta = " + format_number(c.Lambda_star) +
                        " (delta = 0.5, empirical B = " + format_number(bounds.B) + "); measured rate " +
                        format_number(fit.rate));
    } catch (const std::invalid_argument& e) {
      r.notes.push_back(std::string("Lambda*_eta not evaluated: ") + e.what());
    }
  } else {
    r.criteria.push_back(criterion(4, "coupled-chain gap decays geometrically", false,
                                   "only " + std::to_string(ks.size()) + " steps above the floor", ">= 4 points"));
    r.metrics = {{"rate", 0.0}, {"r_squared", 0.0}};
  }
  r.notes.push_back("coupling: both chains of a pair share the noise sequence");
  return r;
}

AuditReport ergodicity_audit(const ExperimentConfig& cfg) {
  const auto task = ergodicity_task(cfg);
  SupervisedObjective obj(task.setup.model, task.setup.basis, task.data, LossKind::squared);
  AuditOptions opts;
  opts.seed = sub_seed(cfg.seed, 9);
  return assumption_audit(obj, opts);
}

PresetInfo make_ergodicity() {
  PresetInfo info;
  info.name = "ergodicity";
  info.summary = "Geometric decay of the gap between two coupled chains on a clipped two-layer model";
  info.criteria = {4};
  info.defaults = [] {
    return json{{"dynamics", {{"eta", 0.05}, {"beta", 64.0}, {"lambda", 0.5}, {"steps", 600}}},
                {"model",
                 {{"M", 16}, {"d", 2}, {"n_modes", 12}, {"bandwidth", 1.0}, {"R", 1.0}, {"D", 1.0},
                  {"teacher_scale", 1.0}}},
                {"data", {{"n", 64}, {"noise_C", 0.5}}},
                {"experiment", {{"pairs", 8}, {"init_scale", 3.0}, {"floor_rel", 1e-9}, {"r2_min", 0.9}}}};
  };
  info.run = run_ergodicity;
  info.audit = ergodicity_audit;
  return info;
}

}  // namespace

PresetInfo posterior_validate_preset() { return make_posterior_validate(); }
PresetInfo ou_moment_preset() { return make_ou_moment(); }
PresetInfo stepsize_bias_preset() { return make_stepsize_bias(); }
PresetInfo ergodicity_preset() { return make_ergodicity(); }

}  // namespace tmgld::experiments::detail
