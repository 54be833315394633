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

#ifndef TMGLD_SERIALIZATION_HPP
#define TMGLD_SERIALIZATION_HPP

#include <iosfwd>

#include "tmgld/cloud.hpp"
#include "tmgld/spectral.hpp"
#include "tmgld/transport.hpp"

namespace tmgld {

// JSON round-trips for the objects a run needs to reproduce a map. Doubles are
// written with round-trip precision; readers throw std::invalid_argument on
// malformed or version-mismatched input.

inline constexpr int kSerializationVersion = 1;

void write_cloud(std::ostream& os, const ParticleCloud& cloud);
ParticleCloud read_cloud(std::istream& is);

void write_basis(std::ostream& os, const SpectralBasis& basis);
SpectralBasis read_basis(std::istream& is);

void write_model(std::ostream& os, const ModelSpec& model);
ModelSpec read_model(std::istream& is);

/// The map is written together with its basis.
void write_map(std::ostream& os, const TransportMap& map);
TransportMap read_map(std::istream& is);

}  // namespace tmgld

#endif  // TMGLD_SERIALIZATION_HPP
