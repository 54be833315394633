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

#include "tmgld/losses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tmgld {

namespace {

// log(1 + exp(z)) without overflow
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

double loss_eval_derivs(LossKind kind, double y, double u, int order) {
  if (order < 0 || order > 3) throw std::invalid_argument("loss_eval_derivs: order must be in 0..3");
  switch (kind) {
    case LossKind::squared:
      switch (order) {
        case 0: return (y - u) * (y - u);
        case 1: return -2.0 * (y - u);
        case 2: return 2.0;
        default: return 0.0;
      }
    case LossKind::logistic: {
      if (y != 1.0 && y != -1.0) throw std::invalid_argument("loss_eval_derivs: logistic labels must be +-1");
      const double s = sigmoid(y * u);  // s = P(label y | u)
      switch (order) {
        case 0: return softplus(-y * u);
        case 1: return -y * (1.0 - s);
        case 2: return s * (1.0 - s);
        default: return y * s * (1.0 - s) * (1.0 - 2.0 * s);
      }
    }
  }
  throw std::invalid_argument("loss_eval_derivs: unsupported loss kind");
}

double clipped_loss_range(double R, double noise_bound_C) {
  if (R < 1.0) throw std::invalid_argument("clipped_loss_range: R must be >= 1");
  if (noise_bound_C < 0.0) throw std::invalid_argument("clipped_loss_range: C must be >= 0");
  return 2.0 * (4.0 * R * R + noise_bound_C * noise_bound_C);
}

std::pair<double, double> bernstein_feasible_band(double R) {
  if (!(R > 0.0)) throw std::invalid_argument("bernstein_feasible_band: R must be positive");
  return {1.0 / (1.0 + std::exp(R)), 1.0 / (1.0 + std::exp(-R))};
}

BernsteinResult bernstein_check(double p, double q, double R) {
  const auto [lo, hi] = bernstein_feasible_band(R);
  // grid points generated by accumulation can sit a rounding error outside
  const double slack = 1e-12;
  auto inside = [&](double v) { return v >= lo - slack && v <= hi + slack; };
  if (!inside(p) || !inside(q))
    throw std::invalid_argument("bernstein_check: (p, q) = (" + std::to_string(p) + ", " + std::to_string(q) +
                                ") outside the feasible band for R = " + std::to_string(R));
  const double lp = std::log(p / q);
  const double lq = std::log((1.0 - p) / (1.0 - q));
  const double C_B = 4.0 + 3.0 * R;
  BernsteinResult r;
  r.lhs = p * lp * lp + (1.0 - p) * lq * lq;
  r.rhs = C_B * (p * lp + (1.0 - p) * lq);
  r.holds = r.lhs <= r.rhs + 1e-12;
  return r;
}

}  // namespace tmgld
