// Copyright 2026 The Declip Lab Authors.
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

#include <random>

#include "declip/neural/layers.hpp"
#include "declip/neural/trainer.hpp"
#include "declip/neural/unet.hpp"

namespace {

using namespace declip::nn;

Tensor4 random_input(Shape4 s) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  Tensor4 t(s);
  for (auto& v : t.data()) v = d(rng);
  return t;
}

void BM_ConvForward(benchmark::State& state) {
  const auto c = static_cast<std::size_t>(state.range(0));
  const auto hw = static_cast<std::size_t>(state.range(1));
  std::mt19937_64 rng(1);
  Conv2d conv(c, c, 3);
  conv.init_he(rng);
  const auto x = random_input({5, c, hw, hw});
  for (auto _ : state) benchmark::DoNotOptimize(conv.forward(x));
}
BENCHMARK(BM_ConvForward)->Args({8, 64})->Args({64, 8})->Unit(benchmark::kMicrosecond);

void BM_ConvBackward(benchmark::State& state) {
  std::mt19937_64 rng(1);
  Conv2d conv(8, 8, 3);
  conv.init_he(rng);
  const auto x = random_input({5, 8, 64, 64});
  const auto g = random_input({5, 8, 64, 64});
  for (auto _ : state) benchmark::DoNotOptimize(conv.backward(g, x));
}
BENCHMARK(BM_ConvBackward)->Unit(benchmark::kMicrosecond);

void BM_UNetTrainStep(benchmark::State& state) {
  const UNetConfig cfg = UNetConfig::desk();
  UNetModel model(cfg, 1);
  Trainer trainer(model, TrainConfig{});
  const auto x = random_input({5, 1, cfg.image_size, cfg.image_size});
  const auto t = random_input(x.shape());
  for (auto _ : state) benchmark::DoNotOptimize(trainer.step(x, t));
}
BENCHMARK(BM_UNetTrainStep)->Unit(benchmark::kMillisecond);

}  // namespace
