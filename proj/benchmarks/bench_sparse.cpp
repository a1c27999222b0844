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

#include <cmath>
#include <vector>

#include "declip/harness/synthetic.hpp"
#include "declip/signal/clipping.hpp"
#include "declip/sparse/clip_mask.hpp"
#include "declip/sparse/dictionary.hpp"
#include "declip/sparse/iht.hpp"

namespace {

using namespace declip;

// One clipped 512-sample frame of synthetic speech.
struct Frame {
  std::vector<double> y;
  sparse::ClipMask mask;
  double theta;
};

Frame clipped_frame() {
  const auto x = harness::synthesize_speech(7);
  const double theta = signal::solve_threshold_for_sdr(x, 3.5);
  const auto c = signal::clip(x, theta);
  // A loud stretch in the middle of the utterance.
  std::vector<double> y(c.samples().begin() + 6000, c.samples().begin() + 6512);
  auto mask = sparse::build_clip_mask(y, theta);
  return {std::move(y), std::move(mask), theta};
}

void BM_AnalysisFft(benchmark::State& state) {
  const auto d = sparse::dct_dictionary(512, 1024);
  const auto f = clipped_frame();
  sparse::Dictionary::Analyzer analyzer(d);
  std::vector<double> out(d.atom_count());
  for (auto _ : state) {
    analyzer.apply(f.y, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_AnalysisFft);

void BM_AnalysisDense(benchmark::State& state) {
  const auto d = sparse::dct_dictionary(512, 1024);
  const auto f = clipped_frame();
  std::vector<double> out(d.atom_count());
  for (auto _ : state) {
    d.analyze_dense(f.y, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_AnalysisDense);

void BM_IhtFrame(benchmark::State& state) {
  const auto d = sparse::dct_dictionary(512, 1024);
  const auto f = clipped_frame();
  const sparse::SparseSolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(sparse::iht_declip_frame(f.y, f.mask, d, cfg));
}
BENCHMARK(BM_IhtFrame)->Unit(benchmark::kMillisecond);

void BM_ConsistentIhtFrame(benchmark::State& state) {
  const auto d = sparse::dct_dictionary(512, 1024);
  const auto f = clipped_frame();
  const sparse::SparseSolverConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sparse::consistent_iht_declip_frame(f.y, f.mask, d, cfg));
  }
}
BENCHMARK(BM_ConsistentIhtFrame)->Unit(benchmark::kMillisecond);

}  // namespace
