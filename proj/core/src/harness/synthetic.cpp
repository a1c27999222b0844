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

#include "declip/harness/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "declip/error.hpp"

namespace declip::harness {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Syllable {
  std::size_t start = 0, length = 0;
  double f0 = 120.0, glide = 0.0;
  double vibrato_hz = 5.0, vibrato_depth = 0.02;
  double am_hz = 4.0, am_depth = 0.3;
  double formants[3] = {500.0, 1500.0, 2500.0};
  double bandwidths[3] = {120.0, 200.0, 300.0};
  double level = 1.0;
};

double formant_gain(const Syllable& s, double freq) {
  double g = 0.02;
  const double weights[3] = {1.0, 0.6, 0.3};
  for (int k = 0; k < 3; ++k) {
    const double d = (freq - s.formants[k]) / s.bandwidths[k];
    g += weights[k] * std::exp(-0.5 * d * d);
  }
  // Spectral tilt of the glottal source.
  return g / (1.0 + freq / 1000.0);
}

}  // namespace

signal::Waveform synthesize_speech(std::uint64_t seed, const SyntheticSpeechOptions& options) {
  if (options.duration_s <= 0.0 || options.sample_rate <= 0 || !(options.peak > 0.0)) {
    throw InvalidArgument("synthesize_speech: duration, rate and peak must be positive");
  }
  const double fs = options.sample_rate;
  const auto total = static_cast<std::size_t>(std::lround(options.duration_s * fs));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };

  // Lay out syllables separated by gaps.
  std::vector<Syllable> syllables;
  std::size_t pos = static_cast<std::size_t>(uniform(0.03, 0.08) * fs);
  const double speaker_f0 = uniform(95.0, 210.0);
  while (pos < total) {
    Syllable s;
    s.start = pos;
    s.length = static_cast<std::size_t>(uniform(0.16, 0.34) * fs);
    if (s.start + s.length > total) s.length = total - s.start;
    if (s.length < static_cast<std::size_t>(0.05 * fs)) break;
    s.f0 = speaker_f0 * uniform(0.85, 1.2);
    s.glide = uniform(-0.25, 0.2);
    s.vibrato_hz = uniform(4.0, 6.5);
    s.vibrato_depth = uniform(0.01, 0.03);
    s.am_hz = uniform(2.5, 6.0);
    s.am_depth = uniform(0.15, 0.4);
    s.formants[0] = uniform(300.0, 850.0);
    s.formants[1] = uniform(900.0, 2300.0);
    s.formants[2] = uniform(2400.0, 3400.0);
    s.bandwidths[0] = uniform(80.0, 160.0);
    s.bandwidths[1] = uniform(120.0, 250.0);
    s.bandwidths[2] = uniform(180.0, 350.0);
    s.level = uniform(0.5, 1.0);
    syllables.push_back(s);
    pos = s.start + s.length + static_cast<std::size_t>(uniform(0.04, 0.12) * fs);
  }

  std::vector<double> x(total, 0.0);
  const double max_freq = std::min(4000.0, 0.45 * fs);
  for (const Syllable& s : syllables) {
    const double len = static_cast<double>(s.length);
    const auto harmonics = static_cast<int>(max_freq / (s.f0 * (1.0 + std::abs(s.glide))));
    std::vector<double> phase(static_cast<std::size_t>(harmonics) + 1);
    for (double& p : phase) p = uniform(0.0, kTwoPi);
    double base_phase = 0.0;
    for (std::size_t n = 0; n < s.length; ++n) {
      const double t = static_cast<double>(n) / fs;
      const double progress = static_cast<double>(n) / len;
      const double f0 = s.f0 * (1.0 + s.glide * progress) *
                        (1.0 + s.vibrato_depth * std::sin(kTwoPi * s.vibrato_hz * t));
      base_phase += kTwoPi * f0 / fs;
      // Raised-sine syllable envelope with slow amplitude modulation.
      const double env = std::pow(std::sin(std::numbers::pi * progress), 0.6) *
                         (1.0 - s.am_depth + s.am_depth * std::cos(kTwoPi * s.am_hz * t));
      double v = 0.0;
      for (int h = 1; h <= harmonics; ++h) {
        const double freq = h * f0;
        if (freq >= max_freq) break;
        v += formant_gain(s, freq) * std::sin(h * base_phase + phase[static_cast<std::size_t>(h)]);
      }
      x[s.start + n] += s.level * env * v;
    }
  }

  // Low breath-noise floor so that gaps are quiet rather than digitally silent.
  std::normal_distribution<double> breath(0.0, 1.0);
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak <= 0.0) peak = 1.0;
  for (double& v : x) v = options.peak * v / peak + 3e-4 * breath(rng);
  return signal::Waveform(std::move(x), options.sample_rate);
}

}  // namespace declip::harness
