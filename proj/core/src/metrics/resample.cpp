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

#include "declip/metrics/resample.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "declip/error.hpp"

namespace declip::metrics {
namespace {

constexpr int kZeroCrossings = 16;
constexpr double kKaiserBeta = 8.6;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

double kaiser(double x, double half_width) {
  const double r = x / half_width;
  if (std::abs(r) >= 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - r * r)) /
         std::cyl_bessel_i(0.0, kKaiserBeta);
}

}  // namespace

signal::Waveform resample(const signal::Waveform& x, int target_rate) {
  if (target_rate <= 0) throw InvalidArgument("resample: target rate must be positive");
  const int source_rate = x.sample_rate();
  if (source_rate == target_rate) return x;

  const long g = std::gcd(source_rate, target_rate);
  const long up = target_rate / g;    // output sample m sits at input time m * down / up
  const long down = source_rate / g;
  const double scale = std::min(1.0, static_cast<double>(target_rate) / source_rate);
  const double half_width = kZeroCrossings / scale;  // in input samples
  const long taps = static_cast<long>(std::ceil(half_width));

  // phase p: fractional offset p / up. Tap j covers input index floor(t) + j.
  std::vector<std::vector<double>> table(static_cast<std::size_t>(up));
  for (long p = 0; p < up; ++p) {
    auto& h = table[static_cast<std::size_t>(p)];
    const double frac = static_cast<double>(p) / static_cast<double>(up);
    for (long j = -taps; j <= taps; ++j) {
      const double dt = static_cast<double>(j) - frac;
      h.push_back(scale * sinc(scale * dt) * kaiser(dt, half_width));
    }
  }

  const auto n_in = static_cast<long>(x.size());
  const long n_out = (n_in * up + down - 1) / down;
  std::vector<double> y(static_cast<std::size_t>(n_out), 0.0);
  const auto in = x.samples();
  for (long m = 0; m < n_out; ++m) {
    const long pos = m * down;
    const long base = pos / up;
    const auto& h = table[static_cast<std::size_t>(pos % up)];
    double acc = 0.0;
    for (long j = -taps; j <= taps; ++j) {
      const long i = base + j;
      if (i < 0 || i >= n_in) continue;
      acc += in[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(j + taps)];
    }
    y[static_cast<std::size_t>(m)] = acc;
  }
  return signal::Waveform(std::move(y), target_rate);
}

}  // namespace declip::metrics
