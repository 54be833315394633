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
#include "tmgld/oracle.hpp"

namespace tmgld::experiments::detail {

using nlohmann::json;

namespace {

Dataset labelled(Dataset data, LossKind loss) {
  if (loss == LossKind::logistic)
    for (auto& y : data.y) y = y > 0.0 ? 1.0 : -1.0;
  return data;
}

ExperimentResult run_grad_check(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  const std::size_t configs = p.count("experiment.configs");
  const double h = p.num("experiment.fd_step"), tol = p.num("experiment.tol");
  const std::size_t n = p.count("data.n");

  ExperimentResult r;
  r.preset = cfg.preset;
  auto& t = add_table(r, "gradients.csv", {"architecture", "config", "loss", "gamma", "n_coeffs", "rel_error"});
  const char* names[] = {"two_layer", "identity_map", "resnet"};
  double worst[3] = {0.0, 0.0, 0.0};
  for (int arch = 0; arch < 3; ++arch) {
    for (std::size_t c = 0; c < configs; ++c) {
      RngStream rng(sub_seed(cfg.seed, 10 + static_cast<std::uint64_t>(arch), c));
      const LossKind loss = c % 2 ? LossKind::logistic : LossKind::squared;
      const double gamma = c % 3 == 0 ? 0.0 : rng.uniform(0.2, 1.5);
      std::unique_ptr<SupervisedObjective> obj;
      Coeffs W;
      if (arch == 0) {
        const auto M = 4 + static_cast<std::size_t>(rng.next_u64() % 9);
        const auto d = 1 + static_cast<std::size_t>(rng.next_u64() % 3);
        const auto modes = 2 + static_cast<std::size_t>(rng.next_u64() % (M - 1));
        auto s = two_layer_setup(M, d, modes, rng.uniform(0.5, 2.0), rng.uniform(1.0, 2.5), 1.0, rng);
        Dataset data{ball_points(n, d, 1.0, rng), Eigen::VectorXd(static_cast<Eigen::Index>(n))};
        for (auto& y : data.y) y = rng.uniform(-1.0, 1.0);
        W = s.identity + perturbation(s.identity, rng.uniform(0.1, 2.0), rng);
        obj = std::make_unique<SupervisedObjective>(s.model, s.basis, labelled(data, loss), loss, gamma);
      } else if (arch == 1) {
        const auto dim = 1 + static_cast<std::size_t>(rng.next_u64() % 2);
        const auto modes = 3 + static_cast<std::size_t>(rng.next_u64() % 8);
        auto basis = cosine_basis(modes, dim, rng.uniform(0.5, 2.0));
        Dataset data;
        data.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
        for (auto& v : data.X.reshaped()) v = rng.uniform();
        data.y.resize(static_cast<Eigen::Index>(n));
        for (auto& y : data.y) y = rng.uniform(-1.0, 1.0);
        W = Coeffs(static_cast<Eigen::Index>(modes), 1);
        rng.fill_normal(W);
        obj = std::make_unique<SupervisedObjective>(make_identity_model(dim), basis, labelled(data, loss), loss, gamma);
      } else {
        const auto M = 4 + static_cast<std::size_t>(rng.next_u64() % 7);
        const auto d = 1 + static_cast<std::size_t>(rng.next_u64() % 3);
        const auto T = 1 + static_cast<std::size_t>(rng.next_u64() % 3);
        const auto modes = 2 + static_cast<std::size_t>(rng.next_u64() % (M - 1));
        ParticleCloud cloud = sample_cloud(M, d, rng);
        ClipConfig clip;
        clip.R = rng.uniform(1.0, 2.5);
        auto basis = std::make_shared<const SpectralBasis>(gram_eigenbasis(cloud, 1.0, modes, d * T));
        const auto model = make_resnet_model(cloud, clip, T, rng);
        Dataset data{ball_points(n, d, 1.0, rng), Eigen::VectorXd(static_cast<Eigen::Index>(n))};
        for (auto& y : data.y) y = rng.uniform(-1.0, 1.0);
        const Coeffs id = identity_coeffs(model, *basis);
        W = id + perturbation(id, rng.uniform(0.1, 1.0), rng);
        obj = std::make_unique<SupervisedObjective>(model, basis, labelled(data, loss), loss, gamma);
      }
      const double err = rel_error(obj->gradient(W), finite_diff_grad(*obj, W, h));
      worst[arch] = std::max(worst[arch], err);
      t.rows.push_back({names[arch], std::to_string(c), loss == LossKind::squared ? "squared" : "logistic",
                        format_number(gamma), std::to_string(W.size()), format_number(err)});
    }
  }
  const double overall = std::max({worst[0], worst[1], worst[2]});
  r.criteria.push_back(criterion(5, "analytic gradients match central finite differences", overall <= tol,
                                 std::to_string(configs) + " configs per architecture; max rel. error two_layer " +
                                     format_number(worst[0]) + ", identity_map " + format_number(worst[1]) +
                                     ", resnet " + format_number(worst[2]),
                                 "<= " + format_number(tol) + " everywhere"));
  r.metrics = {{"max_rel_error", overall}};
  return r;
}

PresetInfo make_grad_check() {
  PresetInfo info;
  info.name = "grad-check";
  info.summary = "Analytic Frechet gradients against central finite differences for every architecture";
  info.criteria = {5};
  info.defaults = [] {
    return json{{"data", {{"n", 16}}}, {"experiment", {{"configs", 100}, {"fd_step", 1e-5}, {"tol", 1e-5}}}};
  };
  info.run = run_grad_check;
  return info;
}

// ---------------------------------------------------------------------------

ExperimentResult run_lipschitz(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  const std::size_t pairs = p.count("experiment.pairs"), per_model = p.count("experiment.pairs_per_model");
  const double D = p.num("model.D"), slack = p.num("experiment.slack");
  const auto grid = polar_grid(p.count("experiment.radii"), p.count("experiment.angles"), D);
  const std::vector<double> r_range = p.list("model.R_range");
  if (r_range.size() != 2 || per_model == 0) throw std::invalid_argument("lipschitz-suite: bad R_range or pairs_per_model");

  ExperimentResult r;
  r.preset = cfg.preset;
  auto& t = add_table(r, "pairs.csv", {"pair", "R", "sup_gap", "bound", "ratio"});
  RngStream rng(sub_seed(cfg.seed, 20));
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  TwoLayerSetup s;
  double R = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    if (i % per_model == 0) {
      R = rng.uniform(r_range[0], r_range[1]);
      s = two_layer_setup(p.count("model.M"), 2, p.count("model.n_modes"), p.num("model.bandwidth"), R, D, rng);
    }
    const Coeffs a = s.identity + perturbation(s.identity, rng.uniform(0.0, 3.0), rng);
    // second map: either a small or a large move away from the first
    const double scale = i % 2 ? rng.uniform(1e-4, 0.1) : rng.uniform(0.1, 3.0);
    const Coeffs b = a + perturbation(a, scale, rng);
    const auto g = lipschitz_gap(s.model, {a, s.basis, 0.0}, {b, s.basis, 0.0}, grid);
    if (g.lhs > g.rhs + slack) ++violations;
    const double ratio = g.lhs / g.rhs;
    worst_ratio = std::max(worst_ratio, ratio);
    t.rows.push_back({std::to_string(i), format_number(R), format_number(g.lhs), format_number(g.rhs),
                      format_number(ratio)});
  }
  r.criteria.push_back(criterion(6, "sup-norm gap under (1 + R D) L2(rho_0) distance", violations == 0,
                                 std::to_string(violations) + " violations in " + std::to_string(pairs) +
                                     " pairs on " + std::to_string(grid.rows()) + " grid points, max ratio " +
                                     format_number(worst_ratio),
                                 "0 violations with slack " + format_number(slack)));
  r.metrics = {{"max_ratio", worst_ratio}, {"violations", static_cast<double>(violations)}};
  return r;
}

PresetInfo make_lipschitz() {
  PresetInfo info;
  info.name = "lipschitz-suite";
  info.summary = "Sup-norm Lipschitz bound of clipped two-layer predictors in the transport map";
  info.criteria = {6};
  info.defaults = [] {
    return json{{"model", {{"M", 16}, {"n_modes", 16}, {"bandwidth", 1.0}, {"D", 1.0}, {"R_range", {1.0, 3.0}}}},
                {"experiment",
                 {{"pairs", 1000}, {"pairs_per_model", 50}, {"radii", 16}, {"angles", 32}, {"slack", 1e-9}}}};
  };
  info.run = run_lipschitz;
  return info;
}

// ---------------------------------------------------------------------------

ExperimentResult run_bernstein(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  const double step = p.num("experiment.step");
  if (!(step > 0.0 && step < 0.5)) throw std::invalid_argument("bernstein-suite: step must lie in (0, 0.5)");
  ExperimentResult r;
  r.preset = cfg.preset;
  auto& t = add_table(r, "bernstein.csv", {"R", "p_lo", "p_hi", "grid_pairs", "violations", "max_lhs_over_rhs"});
  std::size_t total = 0, total_violations = 0;
  for (double R : p.list("experiment.Rs")) {
    const auto [lo, hi] = bernstein_feasible_band(R);
    std::vector<double> pts;
    for (long k = static_cast<long>(std::ceil(lo / step)); static_cast<double>(k) * step <= hi; ++k)
      pts.push_back(static_cast<double>(k) * step);
    std::size_t violations = 0;
    double worst = 0.0;
    for (double pp : pts)
      for (double q : pts) {
        const auto b = bernstein_check(pp, q, R);
        if (!b.holds) ++violations;
        if (b.rhs > 0.0) worst = std::max(worst, b.lhs / b.rhs);
      }
    total += pts.size() * pts.size();
    total_violations += violations;
    t.rows.push_back({format_number(R), format_number(lo), format_number(hi), std::to_string(pts.size() * pts.size()),
                      std::to_string(violations), format_number(worst)});
  }
  r.criteria.push_back(criterion(7, "Bernstein-type bound with C_B = 4 + 3R on the feasible (p, q) grid",
                                 total_violations == 0 && total > 0,
                                 std::to_string(total_violations) + " violations in " + std::to_string(total) + " pairs",
                                 "0 violations at grid step " + format_number(step)));
  r.metrics = {{"violations", static_cast<double>(total_violations)}};
  return r;
}

PresetInfo make_bernstein() {
  PresetInfo info;
  info.name = "bernstein-suite";
  info.summary = "Bernstein condition of the logistic loss on the full feasible probability grid";
  info.criteria = {7};
  info.defaults = [] { return json{{"experiment", {{"Rs", {0.5, 1.0, 2.0}}, {"step", 0.005}}}}; };
  info.run = run_bernstein;
  return info;
}

// ---------------------------------------------------------------------------

ExperimentResult run_correlation(const ExperimentConfig& cfg) {
  const Params& p = cfg.params;
  const std::size_t pairs = p.count("experiment.pairs"), samples = p.count("experiment.samples");
  const std::size_t dmin = p.count("experiment.dim_min"), dmax = p.count("experiment.dim_max");
  if (dmin < 1 || dmax < dmin || dmax > kCorrelationMaxDim) throw std::invalid_argument("correlation-suite: bad dims");
  ExperimentResult r;
  r.preset = cfg.preset;
  auto& t = add_table(r, "correlation.csv", {"pair", "dim", "p_a", "p_b", "p_ab", "p_a_times_p_b", "std_error", "holds"});
  RngStream rng(sub_seed(cfg.seed, 30));
  std::size_t failures = 0;
  double min_excess = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::size_t dim = dmin + i % (dmax - dmin + 1);
    GaussianMeasureSpec spec;
    spec.eigen = make_eigen_sequence(p.num("model.c_mu"), 2.0, dim);
    Eigen::VectorXd a(static_cast<Eigen::Index>(dim)), b(static_cast<Eigen::Index>(dim));
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      const double scale = static_cast<double>(dim) * spec.eigen.mu[k];
      a[k] = rng.uniform(0.05, 2.0) / scale;
      b[k] = rng.uniform(0.05, 2.0) / scale;
    }
    const auto est = gaussian_correlation_mc(spec, a, b, samples, sub_seed(cfg.seed, 31, i));
    if (!est.holds) ++failures;
    min_excess = std::min(min_excess, (est.p_ab - est.product) / est.std_error);
    t.rows.push_back({std::to_string(i), std::to_string(dim), format_number(est.p_a), format_number(est.p_b),
                      format_number(est.p_ab), format_number(est.product), format_number(est.std_error),
                      est.holds ? "1" : "0"});
  }
  r.criteria.push_back(criterion(8, "Gaussian correlation for centred ellipsoids", failures == 0,
                                 std::to_string(failures) + " failures in " + std::to_string(pairs) +
                                     " pairs, min (p_ab - p_a p_b)/stderr = " + format_number(min_excess),
                                 "p_ab >= p_a p_b - 3 stderr in every pair"));
  r.metrics = {{"failures", static_cast<double>(failures)}, {"min_standardised_excess", min_excess}};
  return r;
}

PresetInfo make_correlation() {
  PresetInfo info;
  info.name = "correlation-suite";
  info.summary = "Monte-Carlo Gaussian correlation inequality for random centred ellipsoid pairs";
  info.criteria = {8};
  info.defaults = [] {
    return json{{"model", {{"c_mu", 1.0}}},
                {"experiment", {{"pairs", 20}, {"samples", 1000000}, {"dim_min", 2}, {"dim_max", 6}}}};
  };
  info.run = run_correlation;
  return info;
}

}  // namespace

PresetInfo grad_check_preset() { return make_grad_check(); }
PresetInfo lipschitz_suite_preset() { return make_lipschitz(); }
PresetInfo bernstein_suite_preset() { return make_bernstein(); }
PresetInfo correlation_suite_preset() { return make_correlation(); }

}  // namespace tmgld::experiments::detail
