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

#ifndef TMGLD_LOSSES_HPP
#define TMGLD_LOSSES_HPP

#include <cstddef>
#include <optional>
#include <utility>

namespace tmgld {

enum class LossKind { squared, logistic };

/// u-derivative of order 0..3 of l(y, u). squared: (y - u)^2.
/// logistic: log(1 + exp(-y u)) with y in {-1, +1}.
double loss_eval_derivs(LossKind kind, double y, double u, int order);

inline double loss_value(LossKind kind, double y, double u) { return loss_eval_derivs(kind, y, u, 0); }
inline double loss_derivative(LossKind kind, double y, double u) { return loss_eval_derivs(kind, y, u, 1); }

/// R_bar = 2 (4 R^2 + C^2): range of the squared loss when |f| <= R and |noise| <= C.
double clipped_loss_range(double R, double noise_bound_C);

struct LossBounds {
  double B = 0.0;      // gradient bound
  double L_lip = 0.0;  // gradient Lipschitz constant w.r.t. ||.||_alpha
  double R_bar = 0.0;  // loss range
  double C_B = 0.0;    // Bernstein constant
  double s = 1.0;      // Bernstein exponent, in (0, 1]
  // third-order constants; recorded for audits, never used in a formula
  std::optional<double> C_alpha_prime;
  std::optional<double> alpha_prime;
  bool empirical_lower_bounds = false;
};

/// Interval [1/(1+e^R), 1/(1+e^{-R})] of class probabilities reachable by a
/// logit bounded by R.
std::pair<double, double> bernstein_feasible_band(double R);

struct BernsteinResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// p [log(p/q)]^2 + (1-p) [log((1-p)/(1-q))]^2
//     <= C_B { p log(p/q) + (1-p) log((1-p)/(1-q)) },   C_B = 4 + 3R.
// p and q must lie in the feasible band for R.
BernsteinResult bernstein_check(double p, double q, double R);

}  // namespace tmgld

#endif  // TMGLD_LOSSES_HPP
