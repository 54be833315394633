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

#include "tmgld/loss_audit.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "tmgld/rng.hpp"

namespace tmgld {

LossBounds smoothness_audit(const SupervisedObjective& objective, const SmoothnessAuditOptions& opts) {
  if (opts.n_probes < 2) throw std::invalid_argument("smoothness_audit: need at least 2 probes");
  if (objective.data().size() == 0) throw std::invalid_argument("smoothness_audit: empty dataset");
  const SpectralBasis& basis = *objective.basis();
  const Coeffs base = identity_coeffs(objective.model(), basis);
  const GaussianMeasureSpec unit{1.0, 1.0, basis.eigen};

  LossBounds out;
  out.empirical_lower_bounds = true;
  Coeffs prev_w, prev_g;
  for (std::size_t i = 0; i < opts.n_probes; ++i) {
    RngStream rng(mix_seed(opts.seed, i));
    const Coeffs w = base + opts.probe_scale * sample_prior(unit, basis, rng);
    const Coeffs g = objective.gradient(w);
    out.B = std::max(out.B, g.norm());
    out.R_bar = std::max(out.R_bar, objective.pointwise_losses(w).maxCoeff());
    if (i > 0) {
      const double dw = weighted_norm(w - prev_w, basis.eigen, opts.alpha);
      if (dw > 0.0) out.L_lip = std::max(out.L_lip, (g - prev_g).norm() / dw);
    }
    prev_w = w;
    prev_g = g;
  }
  return out;
}

}  // namespace tmgld
