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

#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "tmgld/rng.hpp"
#include "tmgld/stats.hpp"

using namespace tmgld;

TEST_CASE("mix_seed is deterministic and separates streams") {
  CHECK(mix_seed(1, 0) == mix_seed(1, 0));
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
}

TEST_CASE("rng state round-trips including the cached normal") {
  RngStream a(42);
  a.normal();  // leaves one Box-Muller deviate cached
  const std::string s = a.state();
  std::vector<double> expected;
  for (int i = 0; i < 5; ++i) expected.push_back(a.normal() + a.uniform());
  RngStream b(7);
  b.restore(s);
  for (int i = 0; i < 5; ++i) CHECK(b.normal() + b.uniform() == expected[static_cast<std::size_t>(i)]);
  CHECK_THROWS_AS(b.restore("garbage"), std::invalid_argument);
}

TEST_CASE("fill_normal is column-major and seeded") {
  RngStream a(3), b(3);
  Eigen::MatrixXd m(2, 3);
  a.fill_normal(m);
  for (Eigen::Index j = 0; j < 3; ++j)
    for (Eigen::Index i = 0; i < 2; ++i) CHECK(m(i, j) == b.normal());
}

TEST_CASE("fit_line recovers exact lines") {
  std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const auto f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.r_squared == doctest::Approx(1.0));
  std::vector<double> flat{2, 2, 2, 2};
  const auto g = fit_line(x, flat);
  CHECK(g.slope == 0.0);
  CHECK(g.r_squared == 1.0);
  std::vector<double> one{1};
  CHECK_THROWS_AS(fit_line(one, one), std::invalid_argument);
}

TEST_CASE("correlation, mean and variance") {
  std::vector<double> x{1, 2, 3, 4}, y{8, 6, 4, 2};
  CHECK(mean(x) == 2.5);
  CHECK(sample_variance(x) == doctest::Approx(5.0 / 3.0));
  CHECK(correlation(x, y) == doctest::Approx(-1.0));
}

TEST_CASE("batch means on iid data and streaming accumulator agree") {
  RngStream rng(11);
  std::vector<double> v(100000);
  for (auto& e : v) e = rng.normal();
  const auto bm = batch_means(v, 50);
  CHECK(bm.n_batches == 50);
  CHECK(std::abs(bm.mean) < 4.0 * bm.std_error);
  CHECK(bm.std_error == doctest::Approx(1.0 / std::sqrt(1e5)).epsilon(0.3));

  BatchAccumulator acc(2000);
  for (double e : v) acc.push(e);
  const auto r = acc.result();
  CHECK(r.n_batches == 50);
  CHECK(r.mean == doctest::Approx(bm.mean).epsilon(1e-12));
  CHECK(r.std_error == doctest::Approx(bm.std_error).epsilon(1e-10));
}
