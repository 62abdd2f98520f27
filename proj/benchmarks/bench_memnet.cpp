// Copyright 2026 The MemNet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "memnet/layers.hpp"
#include "memnet/model.hpp"
#include "memnet/ops.hpp"
#include "memnet/rng.hpp"
#include "memnet/trainer.hpp"

namespace {

using namespace memnet;

Tensor<float> random_tensor(Shape s, std::uint64_t seed, bool grad = false) {
  Rng rng(seed);
  std::vector<float> v(s.numel());
  for (float& x : v) x = static_cast<float>(rng.normal());
  return Tensor<float>(s, std::move(v), grad);
}

void BM_Conv3x3Forward(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  const int f = static_cast<int>(state.range(1));
  auto x = random_tensor({batch, f, 31, 31}, 1);
  auto w = random_tensor({f, f, 3, 3}, 2);
  for (auto _ : state) {
    Graph<float> g(false);
    benchmark::DoNotOptimize(conv2d<float>(g, x, w, nullptr, 1));
  }
  state.SetItemsProcessed(state.iterations() * 2LL * batch * 961 * f * f * 9);
}
BENCHMARK(BM_Conv3x3Forward)->Args({8, 16})->Args({64, 16})->Args({8, 64});

void BM_Conv3x3Backward(benchmark::State& state) {
  const int batch = static_cast<int>(state.range(0));
  const int f = static_cast<int>(state.range(1));
  auto x = random_tensor({batch, f, 31, 31}, 1, true);
  auto w = random_tensor({f, f, 3, 3}, 2, true);
  for (auto _ : state) {
    Graph<float> g;
    auto y = conv2d<float>(g, x, w, nullptr, 1);
    auto loss = sum(g, y);
    g.backward(loss);
    x.zero_grad();
    w.zero_grad();
  }
  state.SetItemsProcessed(state.iterations() * 6LL * batch * 961 * f * f * 9);
}
BENCHMARK(BM_Conv3x3Backward)->Args({8, 16})->Args({64, 16});

void BM_TrainStep(benchmark::State& state) {
  MemNetConfig cfg;
  cfg.blocks = 2;
  cfg.recursions = 2;
  cfg.filters = 16;
  auto net = MemNetParams<float>::create(cfg, 1);
  const int batch = static_cast<int>(state.range(0));
  auto x = random_tensor({batch, 1, 31, 31}, 3);
  auto y = random_tensor({batch, 1, 31, 31}, 4);
  TrainConfig tc;
  tc.clip_norm = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(train_step(net, x, y, 1e-3, tc));
}
BENCHMARK(BM_TrainStep)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_InferM6R6(benchmark::State& state) {
  MemNetConfig cfg;
  cfg.filters = static_cast<int>(state.range(0));
  auto net = MemNetParams<float>::create(cfg, 1);
  auto x = random_tensor({1, 1, 64, 64}, 5);
  for (auto _ : state) {
    Graph<float> g(false);
    benchmark::DoNotOptimize(memnet_forward(g, x, net, Mode::kEval));
  }
}
BENCHMARK(BM_InferM6R6)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
