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

#include "declip/metrics/estoi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "declip/error.hpp"
#include "declip/metrics/resample.hpp"
#include "declip/signal/fft.hpp"

namespace declip::metrics {
namespace {

constexpr double kEps = 1e-12;

// Symmetric Hann without its zero endpoints (MATLAB's hanning(N)).
std::vector<double> hanning(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i + 1) /
                                static_cast<double>(n + 1));
  }
  return w;
}

std::size_t nearest_bin(const std::vector<double>& freqs, double target) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < freqs.size(); ++i) {
    if (std::abs(freqs[i] - target) < std::abs(freqs[best] - target)) best = i;
  }
  return best;
}

// bands x frames one-third-octave envelope, stored row-major by band.
std::vector<double> band_envelopes(const std::vector<double>& x, const ThirdOctaveBank& bank,
                                   std::size_t& frames) {
  const auto window = hanning(kEstoiFrameLen);
  const std::size_t hop = kEstoiFrameLen / 2;
  frames = x.size() < kEstoiFrameLen ? 0 : (x.size() - kEstoiFrameLen) / hop + 1;
  const std::size_t bands = bank.center_hz.size();
  std::vector<double> env(bands * frames, 0.0);
  signal::RealFft fft(kEstoiFftSize);
  std::vector<double> frame(kEstoiFrameLen);
  std::vector<std::complex<double>> spec(fft.bins());
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t k = 0; k < kEstoiFrameLen; ++k) frame[k] = x[t * hop + k] * window[k];
    fft.forward(frame, spec);
    for (std::size_t b = 0; b < bands; ++b) {
      double power = 0.0;
      for (std::size_t f = bank.first_bin[b]; f < bank.last_bin[b]; ++f) power += std::norm(spec[f]);
      env[b * frames + t] = std::sqrt(power);
    }
  }
  return env;
}

// Zero-mean, unit-norm rows (bands over time) then columns (time over bands)
// of a bands x seg block taken from env starting at frame `first`.
std::vector<double> normalized_block(const std::vector<double>& env, std::size_t frames,
                                     std::size_t bands, std::size_t first, std::size_t seg) {
  std::vector<double> b(bands * seg);
  for (std::size_t r = 0; r < bands; ++r) {
    double mean = 0.0;
    for (std::size_t c = 0; c < seg; ++c) mean += env[r * frames + first + c];
    mean /= static_cast<double>(seg);
    double norm = 0.0;
    for (std::size_t c = 0; c < seg; ++c) {
      const double v = env[r * frames + first + c] - mean;
      b[r * seg + c] = v;
      norm += v * v;
    }
    norm = std::sqrt(norm) + kEps;
    for (std::size_t c = 0; c < seg; ++c) b[r * seg + c] /= norm;
  }
  for (std::size_t c = 0; c < seg; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < bands; ++r) mean += b[r * seg + c];
    mean /= static_cast<double>(bands);
    double norm = 0.0;
    for (std::size_t r = 0; r < bands; ++r) {
      b[r * seg + c] -= mean;
      norm += b[r * seg + c] * b[r * seg + c];
    }
    norm = std::sqrt(norm) + kEps;
    for (std::size_t r = 0; r < bands; ++r) b[r * seg + c] /= norm;
  }
  return b;
}

}  // namespace

ThirdOctaveBank ThirdOctaveBank::make(int sample_rate, std::size_t fft_size, std::size_t bands,
                                      double min_freq) {
  std::vector<double> freqs(fft_size / 2 + 1);
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    freqs[i] = static_cast<double>(i) * sample_rate / static_cast<double>(fft_size);
  }
  ThirdOctaveBank bank;
  for (std::size_t k = 0; k < bands; ++k) {
    const double kk = static_cast<double>(k);
    bank.center_hz.push_back(min_freq * std::pow(2.0, kk / 3.0));
    const double lo = min_freq * std::pow(2.0, (2.0 * kk - 1.0) / 6.0);
    const double hi = min_freq * std::pow(2.0, (2.0 * kk + 1.0) / 6.0);
    bank.first_bin.push_back(nearest_bin(freqs, lo));
    bank.last_bin.push_back(nearest_bin(freqs, hi));
  }
  return bank;
}

std::pair<std::vector<double>, std::vector<double>> remove_silent_frames(
    const std::vector<double>& clean, const std::vector<double>& degraded,
    double dynamic_range_db, std::size_t frame_len, std::size_t hop) {
  const auto window = hanning(frame_len);
  const std::size_t frames = clean.size() < frame_len ? 0 : (clean.size() - frame_len) / hop + 1;
  std::vector<double> energy_db(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    double e = 0.0;
    for (std::size_t k = 0; k < frame_len; ++k) {
      const double v = clean[t * hop + k] * window[k];
      e += v * v;
    }
    energy_db[t] = 20.0 * std::log10(std::sqrt(e) + kEps);
  }
  const double loudest =
      frames > 0 ? *std::max_element(energy_db.begin(), energy_db.end()) : 0.0;
  std::vector<std::size_t> kept;
  for (std::size_t t = 0; t < frames; ++t) {
    if (energy_db[t] > loudest - dynamic_range_db) kept.push_back(t);
  }
  if (kept.empty()) return {};
  const std::size_t out_len = (kept.size() - 1) * hop + frame_len;
  std::vector<double> xc(out_len, 0.0), xd(out_len, 0.0);
  for (std::size_t j = 0; j < kept.size(); ++j) {
    const std::size_t src = kept[j] * hop;
    for (std::size_t k = 0; k < frame_len; ++k) {
      xc[j * hop + k] += clean[src + k] * window[k];
      xd[j * hop + k] += degraded[src + k] * window[k];
    }
  }
  return {std::move(xc), std::move(xd)};
}

double estoi(const signal::Waveform& clean, const signal::Waveform& degraded) {
  if (clean.size() != degraded.size()) throw ShapeError("estoi: length mismatch");
  signal::require_nonempty(clean, "estoi");
  const signal::Waveform c10 = resample(clean, kEstoiRate);
  const signal::Waveform d10 = resample(degraded, kEstoiRate);
  const std::vector<double> cs(c10.samples().begin(), c10.samples().end());
  const std::vector<double> ds(d10.samples().begin(), d10.samples().end());
  const auto [c_active, d_active] =
      remove_silent_frames(cs, ds, kEstoiDynamicRange, kEstoiFrameLen, kEstoiFrameLen / 2);

  static const ThirdOctaveBank bank = ThirdOctaveBank::make();
  std::size_t frames = 0, frames_d = 0;
  const auto env_c = band_envelopes(c_active, bank, frames);
  const auto env_d = band_envelopes(d_active, bank, frames_d);
  if (frames < kEstoiSegment) {
    throw InsufficientData("estoi: need at least 384 ms of active speech, found " +
                           std::to_string(frames) + " frames");
  }

  const std::size_t bands = bank.center_hz.size();
  double total = 0.0;
  const std::size_t segments = frames - kEstoiSegment + 1;
  for (std::size_t s = 0; s < segments; ++s) {
    const auto bc = normalized_block(env_c, frames, bands, s, kEstoiSegment);
    const auto bd = normalized_block(env_d, frames, bands, s, kEstoiSegment);
    double dot = 0.0;
    for (std::size_t i = 0; i < bc.size(); ++i) dot += bc[i] * bd[i];
    total += dot / static_cast<double>(kEstoiSegment);
  }
  return total / static_cast<double>(segments);
}

}  // namespace declip::metrics
