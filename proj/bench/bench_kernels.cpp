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

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "tmgld/kernels.hpp"
#include "tmgld/rng.hpp"

namespace {

using namespace tmgld;

struct TwoLayerFixture {
  Eigen::MatrixXd values, X;
  Eigen::VectorXd weights, dl;
};

TwoLayerFixture two_layer(Eigen::Index M, Eigen::Index n, Eigen::Index d) {
  RngStream rng(7);
  TwoLayerFixture f;
  f.values.resize(M, d + 1);
  f.X.resize(n, d);
  f.dl.resize(n);
  rng.fill_normal(f.values);
  rng.fill_normal(f.X);
  rng.fill_normal(f.dl);
  f.weights = Eigen::VectorXd::Constant(M, 1.0 / static_cast<double>(M));
  return f;
}

template <Exec E>
void BM_TwoLayerForward(benchmark::State& state) {
  const auto f = two_layer(state.range(0), state.range(1), 2);
  const kernels::TwoLayerArgs args{f.values, f.weights, 1.0, Activation::tanh};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::two_layer_forward(E, args, f.X));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

template <Exec E>
void BM_TwoLayerGrad(benchmark::State& state) {
  const auto f = two_layer(state.range(0), state.range(1), 2);
  const kernels::TwoLayerArgs args{f.values, f.weights, 1.0, Activation::tanh};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::two_layer_value_grad(E, args, f.X, f.dl));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}

template <Exec E>
void BM_ResNetGrad(benchmark::State& state) {
  const Eigen::Index M = state.range(0), n = state.range(1), d = 2, T = 3;
  RngStream rng(11);
  Eigen::MatrixXd values(M, d * T), X(n, d);
  Eigen::VectorXd dl(n), readout(d);
  rng.fill_normal(values);
  rng.fill_normal(X);
  rng.fill_normal(dl);
  rng.fill_normal(readout);
  std::vector<Eigen::MatrixXd> a(T, Eigen::MatrixXd(M, d));
  for (auto& m : a) rng.fill_normal(m);
  const Eigen::VectorXd weights = Eigen::VectorXd::Constant(M, 1.0 / static_cast<double>(M));
  const kernels::ResNetArgs args{values, weights, a, readout, 1.0, Activation::tanh};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::resnet_value_grad(E, args, X, dl));
  state.SetItemsProcessed(state.iterations() * M * n * T);
}

template <Exec E>
void BM_EllipsoidCounts(benchmark::State& state) {
  const Eigen::VectorXd sd = Eigen::VectorXd::Constant(6, 0.5);
  const Eigen::VectorXd a = Eigen::VectorXd::Constant(6, 1.0), b = Eigen::VectorXd::LinSpaced(6, 0.5, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::ellipsoid_counts(E, sd, a, b, state.range(0), 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_TwoLayerForward<Exec::serial>)->Args({32, 1024})->Args({256, 4096});
BENCHMARK(BM_TwoLayerForward<Exec::parallel>)->Args({32, 1024})->Args({256, 4096});
BENCHMARK(BM_TwoLayerGrad<Exec::serial>)->Args({32, 1024})->Args({256, 4096});
BENCHMARK(BM_TwoLayerGrad<Exec::parallel>)->Args({32, 1024})->Args({256, 4096});
BENCHMARK(BM_ResNetGrad<Exec::serial>)->Args({32, 512});
BENCHMARK(BM_ResNetGrad<Exec::parallel>)->Args({32, 512});
BENCHMARK(BM_EllipsoidCounts<Exec::serial>)->Arg(1 << 18);
BENCHMARK(BM_EllipsoidCounts<Exec::parallel>)->Arg(1 << 18);

BENCHMARK_MAIN();
