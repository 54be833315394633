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

#include "internal.hpp"
#include "tmgld/loss_audit.hpp"
#include "tmgld/stats.hpp"

namespace tmgld::experiments::detail {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// regression-rate

struct RegressionTask {
  TwoLayerSetup setup;
  Coeffs teacher;
  Eigen::MatrixXd X;        // pool of n_max training inputs; a run with n uses the first n
  Eigen::VectorXd noise;    // matching label noise
  Eigen::MatrixXd X_test;
  Eigen::VectorXd f_test;   // teacher values on X_test
  Eigen::VectorXd y_test;   // noisy test labels
};

RegressionTask regression_task(const Params& p, std::uint64_t seed, std::size_t n_max) {
  RngStream rng(seed);
  RegressionTask t;
  const std::size_t d = p.count("model.d");
  const double D = p.num("model.D"), C = p.num("data.noise_C");
  t.setup = two_layer_setup(p.count("model.M"), d, p.count("model.n_modes"), p.num("model.bandwidth"), p.num("model.R"),
                            D, rng);
  t.teacher = t.setup.identity + perturbation(t.setup.identity, p.num("model.teacher_scale"), rng);
  t.X = ball_points(n_max, d, D, rng);
  t.noise = bounded_noise(n_max, C, rng);
  const std::size_t n_test = p.count("data.n_test");
  t.X_test = ball_points(n_test, d, D, rng);
  t.f_test = predict(t.setup.model, {t.teacher, t.setup.basis, 0.0}, t.X_test);
  t.y_test = t.f_test + bounded_noise(n_test, C, rng);
  return t;
}

Dataset training_set(const RegressionTask& t, std::size_t n) {
  Dataset data;
  data.X = t.X.topRows(static_cast<Eigen::Index>(n));
  data.y = predict(t.setup.model, {t.teacher, t.setup.basis, 0.0}, data.X) + t.noise.head(static_cast<Eigen::Index>(n));
  return data;
}

struct RegressionRun {
  double excess = 0.0;      // E_chain E_x (f_W - f*)^2
  double train_loss = 0.0;  // E_chain L_hat
  double test_loss = 0.0;   // E_chain mean (y_test - f_W)^2
};

RegressionRun regression_chain(const Params& p, const RegressionTask& t, std::size_t n, double eta_divisor,
                               std::uint64_t chain_seed) {
  SupervisedObjective obj(t.setup.model, t.setup.basis, training_set(t, n), LossKind::squared);
  DynamicsConfig dyn = dynamics_from(p);
  dyn.beta = p.num("experiment.beta_per_n") * static_cast<double>(n);
  dyn.lambda = p.num("experiment.lambda_times_n") / static_cast<double>(n);
  dyn.seed = chain_seed;
  if (eta_divisor != 1.0) {
    const auto k = static_cast<std::size_t>(eta_divisor);
    dyn.eta /= eta_divisor;
    dyn.steps *= k;
    dyn.burn_in *= k;
    dyn.thin *= k;
  }
  RegressionRun out;
  std::size_t count = 0;
  Observables quiet;
  quiet.record = false;
  run_chain(dyn, obj, t.setup.identity, quiet, [&](const ChainState& s) {
    const Eigen::VectorXd f = obj.predict(s.coeffs, t.X_test);
    out.excess += (f - t.f_test).squaredNorm() / static_cast<double>(f.size());
    out.test_loss += (f - t.y_test).squaredNorm() / static_cast<double>(f.size());
    out.train_loss += obj.value(s.coeffs);
    ++count;
  });
  if (count == 0) throw std::invalid_argument("regression-rate: no kept samples (steps <= burn_in)");
  out.excess /= static_cast<double>(count);
  out.test_loss /= static_cast<double>(count);
  out.train_loss /= static_cast<double>(count);
  return out;
}

ExperimentResult run_regression(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  const auto ns_d = p.list("experiment.ns");
  if (ns_d.empty()) throw std::invalid_argument("regression-rate: ns is empty");
  std::vector<std::size_t> ns;
  for (double v : ns_d) {
    if (!(v >= 1.0)) throw std::invalid_argument("regression-rate: every n must be >= 1");
    ns.push_back(static_cast<std::size_t>(v));
  }
  const std::size_t seeds = p.count("experiment.seeds");
  const std::size_t pac_n = p.count("experiment.pac_n");
  const std::size_t n_max = std::max(*std::max_element(ns.begin(), ns.end()), pac_n);

  ExperimentResult r;
  r.preset = cfg.preset;
  auto& t = add_table(r, "excess_risk.csv", {"n", "beta", "lambda", "excess_risk", "std_error", "train_loss", "test_loss"});
  std::vector<double> risks;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    std::vector<double> ex;
    double train = 0.0, test = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
      const auto task = regression_task(p, sub_seed(cfg.seed, 40, s), n_max);
      const auto run = regression_chain(p, task, ns[i], 1.0, sub_seed(cfg.seed, 41, s * 100000 + ns[i]));
      ex.push_back(run.excess);
      train += run.train_loss / static_cast<double>(seeds);
      test += run.test_loss / static_cast<double>(seeds);
    }
    const double m = mean(ex);
    const double se = seeds > 1 ? std::sqrt(sample_variance(ex) / static_cast<double>(seeds)) : 0.0;
    risks.push_back(m);
    const double n = static_cast<double>(ns[i]);
    t.rows.push_back({std::to_string(ns[i]), format_number(p.num("experiment.beta_per_n") * n),
                      format_number(p.num("experiment.lambda_times_n") / n), format_number(m), format_number(se),
                      format_number(train), format_number(test)});
  }
  r.metrics.push_back({"excess_risk", risks.front()});
  const double slope_max = p.num("experiment.slope_max");
  if (ns.size() >= 4) {
    std::vector<double> nd(ns.begin(), ns.end());
    const auto fit = excess_risk_rate_fit(nd, risks);
    r.criteria.push_back(criterion(9, "excess risk decays faster than the slow rate", fit.slope <= slope_max,
                                   "slope = " + format_number(fit.slope) + " (r^2 = " + format_number(fit.r_squared) + ")",
                                   "slope <= " + format_number(slope_max)));
    r.metrics.push_back({"slope", fit.slope});
  } else {
    r.notes.push_back("fewer than 4 sample sizes: no rate fitted");
  }

  const std::size_t pac_seeds = p.count("experiment.pac_seeds");
  if (pac_seeds > 0) {
    const double R_bar = clipped_loss_range(p.num("model.R"), p.num("data.noise_C"));
    const double beta = p.num("experiment.beta_per_n") * static_cast<double>(pac_n);
    const double delta = p.num("experiment.delta");
    auto& pt = add_table(r, "pac_bound.csv",
                         {"seed", "n", "train_loss", "test_loss", "observed_gap", "reference_train_loss", "Xi", "bound"});
    std::size_t violations = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < pac_seeds; ++s) {
      const auto task = regression_task(p, sub_seed(cfg.seed, 42, s), n_max);
      const auto run = regression_chain(p, task, pac_n, 1.0, sub_seed(cfg.seed, 43, s));
      const auto ref = regression_chain(p, task, pac_n, p.num("experiment.ref_divisor"), sub_seed(cfg.seed, 44, s));
      const double Xi = std::abs(run.train_loss - ref.train_loss);
      const double bound = pac_bayes_bound(R_bar, beta, pac_n, delta, Xi);
      const double gap = run.test_loss - run.train_loss;
      if (gap > bound) ++violations;
      min_slack = std::min(min_slack, bound - gap);
      pt.rows.push_back({std::to_string(s), std::to_string(pac_n), format_number(run.train_loss),
                         format_number(run.test_loss), format_number(gap), format_number(ref.train_loss),
                         format_number(Xi), format_number(bound)});
    }
    r.criteria.push_back(criterion(12, "PAC-Bayes bound dominates the observed generalisation gap", violations == 0,
                                   std::to_string(violations) + " violations in " + std::to_string(pac_seeds) +
                                       " seeds, min (bound - gap) = " + format_number(min_slack),
                                   "0 violations"));
    r.metrics.push_back({"pac_violations", static_cast<double>(violations)});
    r.notes.push_back("PAC-Bayes bound uses R_bar = 2(4R^2 + C^2) = " + format_number(R_bar) + ", delta = " +
                      format_number(delta) + ", Xi = |chain - reference| mean training loss");
  }
  return r;
}

AuditReport regression_audit(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  const auto ns = p.list("experiment.ns");
  const auto n = static_cast<std::size_t>(ns.empty() ? 64.0 : ns.front());
  const auto task = regression_task(p, sub_seed(cfg.seed, 40, 0), n);
  SupervisedObjective obj(task.setup.model, task.setup.basis, training_set(task, n), LossKind::squared);
  AuditOptions opts;
  opts.seed = sub_seed(cfg.seed, 9);
  return assumption_audit(obj, opts);
}

PresetInfo make_regression() {
  PresetInfo info;
  info.name = "regression-rate";
  info.summary = "Excess-risk decay in n with beta = n, lambda = 1/n, plus the PAC-Bayes bound check";
  info.criteria = {9, 12};
  info.defaults = [] {
    return json{{"dynamics", {{"eta", 0.05}, {"burn_in", 2000}, {"steps", 7000}, {"thin", 50}}},
                {"model",
                 {{"M", 32}, {"d", 2}, {"n_modes", 6}, {"bandwidth", 1.0}, {"R", 1.0}, {"D", 1.0},
                  {"teacher_scale", 0.5}}},
                {"data", {{"noise_C", 0.5}, {"n_test", 2000}}},
                {"experiment",
                 {{"ns", {64, 128, 256, 512, 1024}},
                  {"seeds", 6},
                  {"beta_per_n", 1.0},
                  {"lambda_times_n", 1.0},
                  {"slope_max", -0.5},
                  {"pac_n", 256},
                  {"pac_seeds", 10},
                  {"ref_divisor", 8.0},
                  {"delta", 0.5}}}};
  };
  info.run = run_regression;
  info.audit = regression_audit;
  return info;
}

// ---------------------------------------------------------------------------
// classification-rate

struct ClassificationTask {
  BasisPtr basis;
  Dataset data;
  std::function<double(const Eigen::VectorXd&)> prob;  // P(Y = 1 | x)
  Eigen::MatrixXd grid;                                // covers the support of P_X
};

ClassificationTask classification_task(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  const double lo = p.num("data.gap_lo"), hi = p.num("data.gap_hi");
  if (!(0.0 < lo && lo < hi && hi < 1.0)) throw std::invalid_argument("classification-rate: need 0 < gap_lo < gap_hi < 1");
  const double scale = p.num("data.logit_scale"), steep = p.num("data.steepness");
  ClassificationTask t;
  t.basis = cosine_basis(p.count("model.n_modes"), 1, p.num("model.c_mu"));
  t.prob = [scale, steep](const Eigen::VectorXd& x) {
    return 1.0 / (1.0 + std::exp(-scale * std::tanh(steep * (x[0] - 0.5))));
  };
  // P_X uniform on [0, lo] u [hi, 1]
  const double mass = lo + (1.0 - hi);
  auto inverse_cdf = [&](double u) { return u * mass <= lo ? u * mass : hi + (u * mass - lo); };
  RngStream rng(sub_seed(cfg.seed, 50));
  const std::size_t n = p.count("data.n");
  t.data.X.resize(static_cast<Eigen::Index>(n), 1);
  t.data.y.resize(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < t.data.X.rows(); ++i) {
    t.data.X(i, 0) = inverse_cdf(rng.uniform());
    t.data.y[i] = rng.uniform() < t.prob(t.data.X.row(i).transpose()) ? 1.0 : -1.0;
  }
  const std::size_t g = p.count("experiment.grid");
  if (g < 2) throw std::invalid_argument("classification-rate: grid needs >= 2 points");
  t.grid.resize(static_cast<Eigen::Index>(g), 1);
  for (std::size_t i = 0; i < g; ++i) t.grid(static_cast<Eigen::Index>(i), 0) = inverse_cdf(static_cast<double>(i) / static_cast<double>(g - 1));
  return t;
}

AuditOptions classification_audit_options(const ExperimentConfig& cfg, const ClassificationTask& t) {
  AuditOptions opts;
  opts.seed = sub_seed(cfg.seed, 9);
  opts.class_probability = t.prob;
  opts.low_noise_grid = t.grid;
  opts.low_noise_threshold = cfg.params.num("experiment.low_noise_threshold");
  return opts;
}

ExperimentResult run_classification(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  const auto task = classification_task(cfg);
  SupervisedObjective obj(make_identity_model(1), task.basis, task.data, LossKind::logistic);
  const auto betas = p.list("experiment.betas");
  if (betas.empty()) throw std::invalid_argument("classification-rate: betas is empty");
  auto bayes_sign = [](const Eigen::VectorXd& x) { return x[0] > 0.5 ? 1.0 : -1.0; };

  ExperimentResult r;
  r.preset = cfg.preset;
  const auto audit = assumption_audit(obj, classification_audit_options(cfg, task));
  for (const auto& item : audit.items)
    if (item.name == "strong low noise")
      r.criteria.push_back(criterion(0, "strong low-noise condition of the generator", item.status == AuditStatus::pass,
                                     item.detail, "min |P(Y=1|x) - 1/2| >= " +
                                                      format_number(p.num("experiment.low_noise_threshold"))));

  auto& t = add_table(r, "error_probability.csv", {"beta", "samples", "wrong", "error_probability", "log_error_probability"});
  std::vector<double> probs;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    DynamicsConfig dyn = dynamics_from(p);
    dyn.beta = betas[i];
    dyn.seed = sub_seed(cfg.seed, 51, i);
    std::vector<TransportMap> samples;
    Observables quiet;
    quiet.record = false;
    run_chain(dyn, obj, Coeffs::Zero(static_cast<Eigen::Index>(task.basis->n_modes), 1), quiet,
              [&](const ChainState& s) { samples.push_back(obj.as_map(s.coeffs)); });
    if (samples.empty()) throw std::invalid_argument("classification-rate: no kept samples (steps <= burn_in)");
    const double prob = classification_error_prob(samples, obj.model(), bayes_sign, task.grid);
    probs.push_back(prob);
    const auto wrong = static_cast<std::size_t>(std::llround(prob * static_cast<double>(samples.size())));
    t.rows.push_back({format_number(betas[i]), std::to_string(samples.size()), std::to_string(wrong),
                      format_number(prob), prob > 0.0 ? format_number(std::log(prob)) : "-inf"});
  }
  r.metrics.push_back({"error_probability", probs.front()});

  const double corr_max = p.num("experiment.corr_max");
  if (betas.size() >= 3) {
    const bool reached_zero = probs.back() == 0.0;
    const bool all_positive = std::all_of(probs.begin(), probs.end(), [](double v) { return v > 0.0; });
    double corr = std::numeric_limits<double>::quiet_NaN();
    if (all_positive) {
      std::vector<double> logs;
      for (double v : probs) logs.push_back(std::log(v));
      corr = correlation(betas, logs);
      r.metrics.push_back({"correlation", corr});
    }
    const bool pass = reached_zero || (all_positive && corr <= corr_max);
    r.criteria.push_back(criterion(10, "misclassification probability falls exponentially in beta", pass,
                                   (all_positive ? "corr(log p, beta) = " + format_number(corr)
                                                 : std::string("some p = 0")) +
                                       ", p at largest beta = " + format_number(probs.back()),
                                   "corr <= " + format_number(corr_max) + ", or p = 0 at the largest beta"));
  } else {
    r.notes.push_back("fewer than 3 inverse temperatures: no trend assessed");
  }
  return r;
}

AuditReport classification_audit(const ExperimentConfig& cfg) {
  const auto task = classification_task(cfg);
  SupervisedObjective obj(make_identity_model(1), task.basis, task.data, LossKind::logistic);
  return assumption_audit(obj, classification_audit_options(cfg, task));
}

PresetInfo make_classification() {
  PresetInfo info;
  info.name = "classification-rate";
  info.summary = "Posterior misclassification probability against beta on a strong low-noise task";
  info.criteria = {10};
  info.defaults = [] {
    return json{{"dynamics", {{"eta", 0.05}, {"lambda", 0.05}, {"burn_in", 5000}, {"steps", 205000}, {"thin", 20}}},
                {"model", {{"n_modes", 8}, {"c_mu", 1.0}}},
                {"data", {{"n", 400}, {"logit_scale", 3.0}, {"steepness", 10.0}, {"gap_lo", 0.4}, {"gap_hi", 0.6}}},
                {"experiment",
                 {{"betas", {25.0, 50.0, 100.0, 200.0}},
                  {"grid", 201},
                  {"corr_max", -0.9},
                  {"low_noise_threshold", 0.3}}}};
  };
  info.run = run_classification;
  info.audit = classification_audit;
  return info;
}

// ---------------------------------------------------------------------------
// finite-width-demo

struct FiniteWidthTask {
  ModelSpec model;
  BasisPtr basis;
  Coeffs init;
  Dataset data;
};

FiniteWidthTask finite_width_task(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  RngStream rng(sub_seed(cfg.seed, 60));
  const std::size_t M = p.count("model.M"), d = p.count("model.d");
  const ParticleCloud drawn = sample_cloud(M, d, rng);
  ParticleCloud cloud = make_finite_width_cloud(drawn.w, drawn.a);
  ClipConfig clip;
  clip.R = p.num("model.R");
  clip.input_bound_D = p.num("model.D");
  FiniteWidthTask t;
  t.basis = std::make_shared<const SpectralBasis>(gram_eigenbasis(cloud, p.num("model.bandwidth"), M, d + 1));
  t.model = make_two_layer_model(std::move(cloud), clip);
  t.init = identity_coeffs(t.model, *t.basis);
  const Coeffs teacher = t.init + perturbation(t.init, p.num("model.teacher_scale"), rng);
  t.data.X = ball_points(p.count("data.n"), d, clip.input_bound_D, rng);
  t.data.y = predict(t.model, {teacher, t.basis, 0.0}, t.data.X);
  return t;
}

ExperimentResult run_finite_width(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  const auto task = finite_width_task(cfg);
  SupervisedObjective obj(task.model, task.basis, task.data, LossKind::squared);
  DynamicsConfig dyn = dynamics_from(p);
  dyn.seed = sub_seed(cfg.seed, 61);
  dyn.burn_in = 0;
  dyn.thin = p.count("experiment.record_every");
  const double ratio = p.num("experiment.target_ratio");
  const double initial = obj.value(task.init);

  ExperimentResult r;
  r.preset = cfg.preset;
  auto& t = add_table(r, "training.csv", {"step", "train_loss", "ratio_to_initial"});
  t.rows.push_back({"0", format_number(initial), "1"});
  std::size_t reached = 0;
  double last = initial;
  Observables quiet;
  quiet.record = false;
  run_chain(dyn, obj, task.init, quiet, [&](const ChainState& s) {
    last = obj.value(s.coeffs);
    if (reached == 0 && last <= ratio * initial) reached = s.step;
    t.rows.push_back({std::to_string(s.step), format_number(last), format_number(last / initial)});
  });
  const std::size_t M = p.count("model.M");
  r.criteria.push_back(criterion(11, "finite-width network fits a realizable task", reached > 0,
                                 reached > 0 ? "loss ratio " + format_number(ratio) + " reached at step " +
                                                   std::to_string(reached) + " with M = " + std::to_string(M)
                                             : "final loss ratio " + format_number(last / initial),
                                 "training loss <= " + format_number(ratio) + " x initial within " +
                                     std::to_string(dyn.steps) + " steps"));
  r.metrics = {{"final_ratio", last / initial}, {"steps_to_target", static_cast<double>(reached)}};
  return r;
}

AuditReport finite_width_audit(const ExperimentConfig& cfg) {
  const auto task = finite_width_task(cfg);
  SupervisedObjective obj(task.model, task.basis, task.data, LossKind::squared);
  AuditOptions opts;
  opts.seed = sub_seed(cfg.seed, 9);
  return assumption_audit(obj, opts);
}

PresetInfo make_finite_width() {
  PresetInfo info;
  info.name = "finite-width-demo";
  info.summary = "Training an M = 8 network with GLD on a realizable regression task";
  info.criteria = {11};
  info.defaults = [] {
    return json{{"dynamics", {{"eta", 0.2}, {"beta", 1e6}, {"lambda", 1e-6}, {"steps", 50000}}},
                {"model", {{"M", 8}, {"d", 2}, {"bandwidth", 1.0}, {"R", 2.0}, {"D", 1.0}, {"teacher_scale", 1.0}}},
                {"data", {{"n", 128}}},
                {"experiment", {{"target_ratio", 0.1}, {"record_every", 500}}}};
  };
  info.run = run_finite_width;
  info.audit = finite_width_audit;
  return info;
}

// ---------------------------------------------------------------------------
// wasserstein-demo

ExperimentResult run_wasserstein(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  const std::size_t n = p.count("data.n"), d = p.count("data.d");
  const auto shift_v = p.list("data.shift");
  if (shift_v.size() != d) throw std::invalid_argument("wasserstein-demo: shift must have d entries");
  RngStream rng(sub_seed(cfg.seed, 70));
  Eigen::MatrixXd src(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  Eigen::MatrixXd tgt(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  rng.fill_normal(src);
  rng.fill_normal(tgt);
  const Eigen::RowVectorXd shift = Eigen::Map<const Eigen::RowVectorXd>(shift_v.data(), static_cast<Eigen::Index>(d));
  tgt = (p.num("data.target_scale") * tgt).rowwise() + shift;

  auto basis = std::make_shared<const SpectralBasis>(
      gram_eigenbasis(src, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n)),
                      p.num("model.bandwidth"), p.count("model.n_modes"), d));
  WassersteinObjective obj(basis, src, tgt, p.num("loss.penalty"), p.num("loss.mmd_bandwidth"));
  const Coeffs init = identity_coeffs(make_wasserstein_model(d), *basis);
  const Eigen::RowVectorXd target_mean = tgt.colwise().mean();
  auto mean_gap = [&](const Coeffs& c) { return (obj.pushed(c).colwise().mean() - target_mean).norm(); };

  DynamicsConfig dyn = dynamics_from(p);
  dyn.seed = sub_seed(cfg.seed, 71);
  dyn.burn_in = 0;
  dyn.thin = p.count("experiment.record_every");
  const double v0 = obj.value(init), g0 = mean_gap(init);

  ExperimentResult r;
  r.preset = cfg.preset;
  auto& t = add_table(r, "transport.csv", {"step", "objective", "pushed_mean_gap"});
  t.rows.push_back({"0", format_number(v0), format_number(g0)});
  double v = v0, g = g0;
  Observables quiet;
  quiet.record = false;
  run_chain(dyn, obj, init, quiet, [&](const ChainState& s) {
    v = obj.value(s.coeffs);
    g = mean_gap(s.coeffs);
    t.rows.push_back({std::to_string(s.step), format_number(v), format_number(g)});
  });
  r.criteria.push_back(criterion(0, "transport objective decreases", v < v0,
                                 format_number(v0) + " -> " + format_number(v), "final < initial"));
  r.criteria.push_back(criterion(0, "pushed-forward mean approaches the target mean", g < 0.5 * g0,
                                 format_number(g0) + " -> " + format_number(g), "final gap < half the initial gap"));
  r.metrics = {{"final_objective", v}, {"final_mean_gap", g}};
  return r;
}

PresetInfo make_wasserstein() {
  PresetInfo info;
  info.name = "wasserstein-demo";
  info.summary = "Soft-constrained optimal transport between two Gaussian samples";
  info.criteria = {};
  info.defaults = [] {
    return json{{"dynamics", {{"eta", 0.05}, {"beta", 1e4}, {"lambda", 1e-4}, {"steps", 2000}}},
                {"model", {{"n_modes", 20}, {"bandwidth", 1.0}}},
                {"loss", {{"penalty", 20.0}, {"mmd_bandwidth", 1.0}}},
                {"data", {{"n", 60}, {"d", 2}, {"shift", {1.0, -0.5}}, {"target_scale", 0.7}}},
                {"experiment", {{"record_every", 100}}}};
  };
  info.run = run_wasserstein;
  return info;
}

}  // namespace

PresetInfo regression_rate_preset() { return make_regression(); }
PresetInfo classification_rate_preset() { return make_classification(); }
PresetInfo finite_width_demo_preset() { return make_finite_width(); }
PresetInfo wasserstein_demo_preset() { return make_wasserstein(); }

}  // namespace tmgld::experiments::detail
