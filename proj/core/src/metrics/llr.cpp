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

#include "declip/metrics/llr.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "declip/error.hpp"
#include "declip/metrics/lpc.hpp"
#include "declip/signal/stft.hpp"

namespace declip::metrics {
namespace {

// a R aᵀ with R the Toeplitz matrix of r.
double quadratic_form(const std::vector<double>& a, const std::vector<double>& r) {
  const std::size_t p = a.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      acc += a[i] * a[j] * r[i > j ? i - j : j - i];
    }
  }
  return acc;
}

}  // namespace

double llr(const signal::Waveform& clean, const signal::Waveform& degraded, const LlrConfig& cfg) {
  if (clean.size() != degraded.size()) throw ShapeError("llr: length mismatch");
  signal::require_nonempty(clean, "llr");
  const int rate = clean.sample_rate();
  const std::size_t order =
      cfg.order > 0 ? cfg.order : static_cast<std::size_t>(std::lround(rate / 1000.0));
  const auto frame_len = static_cast<std::size_t>(std::lround(cfg.frame_ms * 1e-3 * rate));
  const auto shift = static_cast<std::size_t>(std::lround(cfg.shift_ms * 1e-3 * rate));
  if (frame_len <= order || shift == 0) throw InvalidArgument("llr: frame too short for order");

  const auto window = signal::make_window(signal::WindowKind::kHannPeriodic, frame_len);
  const std::size_t n = clean.size();
  const std::size_t frames = n <= frame_len ? 1 : 1 + (n - frame_len) / shift;
  std::vector<double> fc(frame_len), fd(frame_len), distances;
  distances.reserve(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t start = t * shift;
    for (std::size_t k = 0; k < frame_len; ++k) {
      const std::size_t i = start + k;
      fc[k] = i < n ? clean[i] * window[k] : 0.0;
      fd[k] = i < n ? degraded[i] * window[k] : 0.0;
    }
    const LpcModel c = lpc(fc, order);
    const LpcModel d = lpc(fd, order);
    if (!c.valid || !d.valid) continue;
    const double num = quadratic_form(d.coefficients, c.autocorrelation);
    const double den = quadratic_form(c.coefficients, c.autocorrelation);
    if (!(den > 0.0) || !(num > 0.0)) continue;
    distances.push_back(std::clamp(std::log(num / den), 0.0, kLlrMax));
  }
  if (distances.empty()) throw InsufficientData("llr: no frame with energy in both signals");

  std::sort(distances.begin(), distances.end());
  const auto keep = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(cfg.keep_fraction * static_cast<double>(distances.size()))),
      1, distances.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < keep; ++i) sum += distances[i];
  return sum / static_cast<double>(keep);
}

}  // namespace declip::metrics
