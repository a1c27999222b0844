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
#include <vector>

#include "declip/metrics/estoi.hpp"
#include "declip/harness/synthetic.hpp"
#include "declip/signal/clipping.hpp"
#include "declip/signal/stft.hpp"

namespace {

using declip::signal::Waveform;

Waveform noise(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return Waveform(std::move(v), 16000);
}

void BM_Stft(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  const declip::signal::StftConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(declip::signal::stft(x, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Stft)->Arg(16000)->Arg(160000);

void BM_StftRoundTrip(benchmark::State& state) {
  const auto x = noise(16000);
  const declip::signal::StftConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(declip::signal::istft(declip::signal::stft(x, cfg)));
}
BENCHMARK(BM_StftRoundTrip);

void BM_ThresholdSolver(benchmark::State& state) {
  const auto x = declip::harness::synthesize_speech(3);
  for (auto _ : state) benchmark::DoNotOptimize(declip::signal::solve_threshold_for_sdr(x, 3.5));
}
BENCHMARK(BM_ThresholdSolver);

void BM_Estoi(benchmark::State& state) {
  const auto x = declip::harness::synthesize_speech(4);
  const auto y = declip::signal::clip(x, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(declip::metrics::estoi(x, y));
}
BENCHMARK(BM_Estoi);

}  // namespace
