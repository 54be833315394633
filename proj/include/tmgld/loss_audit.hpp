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

#ifndef TMGLD_LOSS_AUDIT_HPP
#define TMGLD_LOSS_AUDIT_HPP

#include <cstddef>
#include <cstdint>

#include "tmgld/losses.hpp"
#include "tmgld/objective.hpp"

namespace tmgld {

struct SmoothnessAuditOptions {
  std::size_t n_probes = 16;
  std::uint64_t seed = 0;
  double alpha = 0.0;        // exponent of the |.|_alpha norm for the Lipschitz ratio
  double probe_scale = 1.0;  // probes are W_0 + probe_scale * (prior draw with beta = lambda = 1)
};

/// Empirical B, L_lip and R_bar over seeded random probes. Probe i depends only
/// on (seed, i), so more probes never lower an estimate. The results are lower
/// bounds on the true constants and are flagged as such.
LossBounds smoothness_audit(const SupervisedObjective& objective, const SmoothnessAuditOptions& opts);

}  // namespace tmgld

#endif  // TMGLD_LOSS_AUDIT_HPP
