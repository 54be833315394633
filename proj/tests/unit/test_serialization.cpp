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

#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "tmgld/serialization.hpp"

using namespace tmgld;
using namespace tmgld::testing;

TEST_CASE("cloud round-trip is exact") {
  RngStream rng(1);
  const auto c = sample_cloud(7, 3, rng);
  std::stringstream s;
  write_cloud(s, c);
  const auto r = read_cloud(s);
  CHECK(r.w == c.w);
  CHECK(r.a == c.a);
  CHECK(r.weights == c.weights);
  CHECK(r.mode == c.mode);
}

TEST_CASE("basis, model and map round-trips") {
  RngStream rng(2);
  auto cloud = sample_cloud(6, 2, rng);
  const auto model = make_resnet_model(cloud, ClipConfig{}, 2, rng);
  auto basis = std::make_shared<const SpectralBasis>(gram_eigenbasis(cloud, 0.9, 5, 4));

  std::stringstream sb;
  write_basis(sb, *basis);
  const auto b = read_basis(sb);
  CHECK(b.basis_vectors == basis->basis_vectors);
  CHECK(b.eigen.mu == basis->eigen.mu);
  CHECK(b.eigen.c_mu == basis->eigen.c_mu);
  CHECK(b.nodes == basis->nodes);

  std::stringstream sm;
  write_model(sm, model);
  const auto m = read_model(sm);
  CHECK(m.resnet_blocks == 2);
  CHECK(m.resnet_a[1] == model.resnet_a[1]);
  CHECK(m.readout == model.readout);
  CHECK(m.cloud.w == model.cloud.w);

  Coeffs c(5, 4);
  rng.fill_normal(c);
  TransportMap W{c, basis, 0.5};
  std::stringstream sw;
  write_map(sw, W);
  const auto w2 = read_map(sw);
  CHECK(w2.coeffs == c);
  CHECK(w2.gamma == 0.5);
  const Dataset d = random_dataset(4, 2, rng);
  CHECK(predict(m, w2, d.X) == predict(model, W, d.X));

  const auto cos = make_cosine_basis(2, 1, make_eigen_sequence(1.0, 2.0, 5));
  std::stringstream sc;
  write_basis(sc, cos);
  CHECK(read_basis(sc).frequencies == cos.frequencies);
}

TEST_CASE("malformed input is rejected") {
  std::stringstream junk("{not json");
  CHECK_THROWS_AS(read_cloud(junk), std::invalid_argument);
  std::stringstream wrong_version("{\"version\": 2, \"cloud\": {}}");
  CHECK_THROWS_AS(read_cloud(wrong_version), std::invalid_argument);
  std::stringstream missing("{\"version\": 1}");
  CHECK_THROWS_AS(read_model(missing), std::invalid_argument);
}
