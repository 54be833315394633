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

#include "tmgld/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tmgld/loss_audit.hpp"
#include "tmgld/oracle.hpp"

namespace tmgld {

namespace {

double v_bar(double b_bar, double x) { return 4.0 * b_bar / (std::sqrt((1.0 + x) / 2.0) - x); }

double lambda_star(const MixingInputs& in, double kappa, double V) {
  const double arg = kappa * (V + 1.0) / (1.0 - in.delta);
  if (!(arg > 1.0)) throw std::invalid_argument("mixing_constants: log argument must exceed 1");
  return std::min(in.lambda / (2.0 * in.mu_0), 0.5) * in.delta / (4.0 * std::log(arg));
}

void require_positive(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!(x > 0.0)) throw std::invalid_argument(std::string(what) + ": values must be positive");
}

LineFit log_log_fit(std::span<const double> x, std::span<const double> y, std::size_t min_points, const char* what) {
  if (x.size() != y.size()) throw std::invalid_argument(std::string(what) + ": length mismatch");
  if (x.size() < min_points)
    throw std::invalid_argument(std::string(what) + ": need at least " + std::to_string(min_points) + " points");
  require_positive(x, what);
  require_positive(y, what);
  std::vector<double> lx(x.size()), ly(y.size());
  std::transform(x.begin(), x.end(), lx.begin(), [](double v) { return std::log(v); });
  std::transform(y.begin(), y.end(), ly.begin(), [](double v) { return std::log(v); });
  return fit_line(lx, ly);
}

}  // namespace

MixingConstants mixing_constants(const MixingInputs& in) {
  if (!(in.delta > 0.0 && in.delta < 1.0)) throw std::invalid_argument("mixing_constants: delta must lie in (0, 1)");
  if (!(in.eta >= 0.0) || !(in.lambda > 0.0) || !(in.mu_0 > 0.0) || !(in.mu_1 > 0.0))
    throw std::invalid_argument("mixing_constants: eta >= 0 and lambda, mu_0, mu_1 > 0 required");
  if (!(in.beta > in.eta)) throw std::invalid_argument("mixing_constants: beta must exceed eta");
  MixingConstants c;
  c.delta_used = in.delta;
  c.rho = 1.0 / (1.0 + in.lambda * in.eta / in.mu_0);
  c.b = in.mu_0 / in.lambda * in.B + in.c_mu / (in.beta * in.lambda);
  c.b_bar = std::max(c.b, 1.0);
  c.kappa = c.b_bar + 1.0;
  const double x0 = std::exp(-in.lambda / in.mu_1);
  c.V_bar_0 = v_bar(c.b_bar, x0);
  c.Lambda_star_0 = lambda_star(in, c.kappa, c.V_bar_0);
  if (in.eta > 0.0) {
    c.V_bar = v_bar(c.b_bar, std::pow(c.rho, 1.0 / in.eta));
    c.Lambda_star = lambda_star(in, c.kappa, c.V_bar);
  } else {
    c.V_bar = c.V_bar_0;
    c.Lambda_star = c.Lambda_star_0;
  }
  c.C_W0 = c.kappa * (c.V_bar + 1.0) + std::sqrt(2.0) * (in.R_bar + c.b) / std::sqrt(in.delta);
  return c;
}

double pac_bayes_bound(double R_bar, double beta, std::size_t n, double delta, double Xi) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("pac_bayes_bound: delta must lie in (0, 1)");
  if (n == 0) throw std::invalid_argument("pac_bayes_bound: n must be >= 1");
  const double rn = std::sqrt(static_cast<double>(n));
  const double r2 = R_bar * R_bar;
  return r2 / rn * (2.0 * (1.0 + 2.0 * beta / rn) + std::log((1.0 + std::exp(r2 / 2.0)) / delta)) + 2.0 * Xi;
}

DecayFit fit_geometric_decay(std::span<const double> k, std::span<const double> gaps, double eta) {
  if (k.size() != gaps.size()) throw std::invalid_argument("fit_geometric_decay: length mismatch");
  if (k.size() < 4) throw std::invalid_argument("fit_geometric_decay: need at least 4 points");
  if (!(eta > 0.0)) throw std::invalid_argument("fit_geometric_decay: eta must be positive");
  require_positive(gaps, "fit_geometric_decay");
  std::vector<double> lg(gaps.size());
  std::transform(gaps.begin(), gaps.end(), lg.begin(), [](double v) { return std::log(v); });
  const LineFit f = fit_line(k, lg);
  return {-f.slope / eta, f.r_squared, f.slope};
}

LineFit fit_stepsize_bias(std::span<const double> etas, std::span<const double> biases) {
  return log_log_fit(etas, biases, 3, "fit_stepsize_bias");
}

LineFit excess_risk_rate_fit(std::span<const double> ns, std::span<const double> risks) {
  return log_log_fit(ns, risks, 4, "excess_risk_rate_fit");
}

namespace {

EpsilonStar finish_epsilon(EpsilonStar e, std::size_t n, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("epsilon_star: s must lie in (0, 1]");
  if (n == 0) throw std::invalid_argument("epsilon_star: n must be >= 1");
  e.floor = std::pow(static_cast<double>(n), -1.0 / (2.0 * (2.0 - s)));
  e.floor_binds = e.raw < e.floor;
  e.value = std::max(e.raw, e.floor);
  return e;
}

}  // namespace

EpsilonStar epsilon_star(const std::function<double(double)>& phi, double beta, std::size_t n, double s, double lo,
                         double hi) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("epsilon_star: need 0 < lo < hi");
  auto g = [&](double e) { return phi(e) - beta * e * e; };
  EpsilonStar e;
  if (g(lo) <= 0.0) {
    e.below_bracket = true;
    e.raw = lo;
    return finish_epsilon(e, n, s);
  }
  if (g(hi) > 0.0) {
    e.unresolved = true;
    e.raw = hi;
    return finish_epsilon(e, n, s);
  }
  // Bisection in log scale; the bracket spans many decades.
  double a = std::log(lo), b = std::log(hi);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
    const double m = 0.5 * (a + b);
    (g(std::exp(m)) > 0.0 ? a : b) = m;
  }
  e.raw = std::exp(b);
  return finish_epsilon(e, n, s);
}

EpsilonStar epsilon_star(std::span<const double> eps_grid, std::span<const double> phi_grid, double beta,
                         std::size_t n, double s) {
  if (eps_grid.size() != phi_grid.size() || eps_grid.size() < 2)
    throw std::invalid_argument("epsilon_star: need matching grids with at least 2 points");
  for (std::size_t i = 1; i < eps_grid.size(); ++i)
    if (!(eps_grid[i] > eps_grid[i - 1])) throw std::invalid_argument("epsilon_star: grid must be increasing");
  auto g = [&](std::size_t i) { return phi_grid[i] - beta * eps_grid[i] * eps_grid[i]; };
  EpsilonStar e;
  if (g(0) <= 0.0) {
    e.below_bracket = true;
    e.raw = eps_grid[0];
    return finish_epsilon(e, n, s);
  }
  std::size_t j = 1;
  while (j < eps_grid.size() && g(j) > 0.0) ++j;
  if (j == eps_grid.size()) {
    e.unresolved = true;
    e.raw = eps_grid.back();
    return finish_epsilon(e, n, s);
  }
  if (g(j) == 0.0) {
    e.raw = eps_grid[j];
    return finish_epsilon(e, n, s);
  }
  const double x0 = eps_grid[j - 1], x1 = eps_grid[j];
  const double p0 = phi_grid[j - 1], p1 = phi_grid[j];
  auto gi = [&](double x) { return p0 + (p1 - p0) * (x - x0) / (x1 - x0) - beta * x * x; };
  double a = x0, b = x1;
  for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
    const double m = 0.5 * (a + b);
    (gi(m) > 0.0 ? a : b) = m;
  }
  e.raw = b;
  return finish_epsilon(e, n, s);
}

void RateParams::validate() const {
  if (!(gamma > 0.5)) throw std::invalid_argument("RateParams: gamma must exceed 1/2");
  if (!(theta > 0.0 && theta < 1.0 - alpha_tilde()))
    throw std::invalid_argument("RateParams: theta must lie in (0, 1 - alpha_tilde)");
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("RateParams: s must lie in (0, 1]");
}

std::size_t truncation_for_bias(double epsilon, double theta, double gamma) {
  if (!(gamma > -1.0)) throw std::invalid_argument("truncation_for_bias: gamma must exceed -1");
  if (!(theta > 0.0 && theta < 1.0 - 1.0 / (2.0 * (gamma + 1.0))))
    throw std::invalid_argument("truncation_for_bias: theta must lie in (0, 1 - 1/(2(gamma+1)))");
  if (!(epsilon > 0.0)) throw std::invalid_argument("truncation_for_bias: epsilon must be positive");
  const double x = std::pow(epsilon, -1.0 / (theta * (gamma + 1.0)));
  // Absorb round-off so exact integers such as 0.01^{-1} are not pushed up by one.
  return static_cast<std::size_t>(std::max(1.0, std::ceil(x - 1e-9 * x)));
}

ConcentrationEstimate concentration_function(const Coeffs& target, const EigenSequence& eigen, double beta,
                                             double lambda, double epsilon, std::uint64_t n_samples,
                                             std::uint64_t seed) {
  if (target.rows() != eigen.mu.size()) throw std::invalid_argument("concentration_function: shape mismatch");
  if (!(epsilon > 0.0)) throw std::invalid_argument("concentration_function: epsilon must be positive");
  ConcentrationEstimate out;
  const Eigen::VectorXd t2 = target.rowwise().squaredNorm();
  if (std::sqrt(t2.sum()) > epsilon) {
    // h_k = nu mu_k t_k / (1 + nu mu_k); |h - t|_H decreases in nu.
    auto dist = [&](double nu) {
      return std::sqrt((t2.array() / (1.0 + nu * eigen.mu.array()).square()).sum());
    };
    double lo = 0.0, hi = 1.0;
    while (dist(hi) > epsilon) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (lo + hi);
      (dist(m) > epsilon ? lo : hi) = m;
    }
    const Eigen::ArrayXd scale = hi * eigen.mu.array() / (1.0 + hi * eigen.mu.array());
    out.bias = lambda * beta * (scale.square() * t2.array() / eigen.mu.array()).sum();
  }
  const GaussianMeasureSpec spec{beta, lambda, eigen};
  const SmallBallEstimate sb = small_ball_mc(spec, epsilon, n_samples, seed);
  out.small_ball = static_cast<double>(target.cols()) * sb.neg_log;
  out.small_ball_bounded = sb.zero_hits;
  out.value = out.bias + out.small_ball;
  return out;
}

double classification_error_prob(const std::vector<TransportMap>& samples, const ModelSpec& model,
                                 const std::function<double(const Eigen::VectorXd&)>& bayes_sign,
                                 const Eigen::MatrixXd& x_grid) {
  if (samples.empty()) throw std::invalid_argument("classification_error_prob: no samples");
  Eigen::VectorXd g(x_grid.rows());
  for (Eigen::Index i = 0; i < x_grid.rows(); ++i) g[i] = bayes_sign(x_grid.row(i).transpose());
  std::size_t wrong = 0;
  for (const auto& W : samples) {
    const Eigen::VectorXd f = predict(model, W, x_grid);
    bool any = false;
    for (Eigen::Index i = 0; i < f.size() && !any; ++i) any = !(f[i] * g[i] > 0.0);
    wrong += any;
  }
  return static_cast<double>(wrong) / static_cast<double>(samples.size());
}

const char* to_string(AuditStatus s) {
  switch (s) {
    case AuditStatus::pass: return "pass";
    case AuditStatus::fail: return "fail";
    case AuditStatus::not_checkable: return "not machine-checkable";
  }
  return "?";
}

bool AuditReport::all_checkable_pass() const {
  return std::none_of(items.begin(), items.end(), [](const AuditItem& i) { return i.status == AuditStatus::fail; });
}

AuditItem eigen_condition_audit(const EigenSequence& eigen) {
  AuditItem it;
  it.name = "eigenvalue condition";
  it.margin = eigen_condition_margin(eigen);
  const double tol = 1e-12 * std::max(1.0, eigen.c_mu);
  it.status = it.margin >= -tol ? AuditStatus::pass : AuditStatus::fail;
  std::ostringstream os;
  os << "min_k c_mu (k+1)^-2 - mu_k over " << eigen.size() << " modes";
  it.detail = os.str();
  return it;
}

AuditReport assumption_audit(const SupervisedObjective& objective, const AuditOptions& opts) {
  AuditReport rep;
  rep.items.push_back(eigen_condition_audit(objective.eigen()));

  const LossBounds lb = smoothness_audit(objective, {opts.n_probes, opts.seed, opts.alpha, opts.probe_scale});
  AuditItem bound;
  bound.name = "boundedness and smoothness";
  const bool finite = std::isfinite(lb.B) && std::isfinite(lb.L_lip) && std::isfinite(lb.R_bar);
  bound.status = finite ? AuditStatus::pass : AuditStatus::fail;
  bound.margin = lb.B;
  std::ostringstream os;
  os << "empirical lower bounds: B=" << lb.B << " L=" << lb.L_lip << " R_bar=" << lb.R_bar;
  bound.detail = os.str();
  rep.items.push_back(bound);

  rep.items.push_back({"third-order smoothness", AuditStatus::not_checkable, 0.0, "constants recorded for reference only"});

  AuditItem bern;
  bern.name = "Bernstein condition";
  const double R = objective.model().clip.R;
  if (objective.loss() == LossKind::logistic && objective.model().arch == Architecture::two_layer && std::isfinite(R)) {
    bern.status = AuditStatus::pass;
    bern.margin = 4.0 + 3.0 * R;
    bern.detail = "well-specified logistic model with |f| <= R: s = 1, C_B = 4 + 3R";
  } else {
    bern.detail = "predictor condition not machine-checkable for this configuration";
  }
  rep.items.push_back(bern);

  AuditItem noise;
  noise.name = "strong low noise";
  if (opts.class_probability && opts.low_noise_grid.rows() > 0) {
    double min_gap = 1.0, min_delta = std::log(2.0);
    for (Eigen::Index i = 0; i < opts.low_noise_grid.rows(); ++i) {
      const double p = opts.class_probability(opts.low_noise_grid.row(i).transpose());
      min_gap = std::min(min_gap, std::abs(p - 0.5));
      const double h = -(p > 0.0 ? p * std::log(p) : 0.0) - (p < 1.0 ? (1.0 - p) * std::log(1.0 - p) : 0.0);
      min_delta = std::min(min_delta, std::log(2.0) - h);
    }
    noise.status = min_gap > 0.0 && min_gap >= opts.low_noise_threshold ? AuditStatus::pass : AuditStatus::fail;
    noise.margin = min_gap;
    std::ostringstream ns;
    ns << "min |P(Y=1|x) - 1/2| = " << min_gap << ", delta margin log2 - H(p) = " << min_delta;
    noise.detail = ns.str();
  } else {
    noise.detail = "no class-probability generator supplied";
  }
  rep.items.push_back(noise);
  return rep;
}

}  // namespace tmgld
