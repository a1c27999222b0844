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

#include "declip/signal/stft.hpp"

#include <cmath>
#include <numbers>

#include "declip/error.hpp"
#include "declip/signal/fft.hpp"

namespace declip::signal {
namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

StftConfig StftConfig::for_sample_rate(int sample_rate) {
  if (sample_rate <= 0) throw InvalidArgument("StftConfig: sample rate must be positive");
  StftConfig cfg;
  cfg.frame_len = static_cast<std::size_t>(std::lround(0.032 * sample_rate));
  cfg.frame_shift = static_cast<std::size_t>(std::lround(0.008 * sample_rate));
  cfg.fft_size = next_pow2(cfg.frame_len);
  cfg.validate();
  return cfg;
}

StftConfig StftConfig::for_image_size(std::size_t image_size) {
  StftConfig cfg;
  cfg.fft_size = 2 * image_size;
  cfg.frame_len = cfg.fft_size;
  cfg.frame_shift = cfg.fft_size / 4;
  cfg.validate();
  return cfg;
}

std::size_t StftConfig::frame_count(std::size_t length) const {
  if (length == 0) return 0;
  return (length - 1 + lead_padding()) / frame_shift + 1;
}

void StftConfig::validate() const {
  if (frame_shift == 0 || frame_shift > frame_len || frame_len > fft_size) {
    throw InvalidArgument("StftConfig: need 0 < frame_shift <= frame_len <= fft_size");
  }
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (kind == WindowKind::kHannPeriodic) {
    for (std::size_t n = 0; n < length; ++n) {
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                  static_cast<double>(length));
    }
  }
  return w;
}

ComplexSpectrogram stft(const Waveform& x, const StftConfig& cfg) {
  cfg.validate();
  require_nonempty(x, "stft");
  ComplexSpectrogram s;
  s.config = cfg;
  s.original_length = x.size();
  s.sample_rate = x.sample_rate();
  s.frames = cfg.frame_count(x.size());
  s.values.assign(s.frames * cfg.bins(), {});

  const auto window = make_window(cfg.window, cfg.frame_len);
  const auto samples = x.samples();
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const auto pad = static_cast<std::ptrdiff_t>(cfg.lead_padding());
  RealFft fft(cfg.fft_size);
  std::vector<double> frame(cfg.frame_len);
  for (std::size_t t = 0; t < s.frames; ++t) {
    const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(t * cfg.frame_shift) - pad;
    for (std::size_t k = 0; k < cfg.frame_len; ++k) {
      const std::ptrdiff_t i = start + static_cast<std::ptrdiff_t>(k);
      frame[k] = (i >= 0 && i < n) ? samples[static_cast<std::size_t>(i)] * window[k] : 0.0;
    }
    fft.forward(frame, s.frame(t));
  }
  return s;
}

Waveform istft(const ComplexSpectrogram& s) {
  s.config.validate();
  if (s.values.size() != s.frames * s.bins()) {
    throw ShapeError("istft: spectrogram storage does not match frames x bins");
  }
  const auto& cfg = s.config;
  const auto window = make_window(cfg.window, cfg.frame_len);
  const auto n = static_cast<std::ptrdiff_t>(s.original_length);
  const auto pad = static_cast<std::ptrdiff_t>(cfg.lead_padding());
  std::vector<double> out(s.original_length, 0.0), norm(s.original_length, 0.0);
  RealFft fft(cfg.fft_size);
  std::vector<double> frame(cfg.frame_len);
  const double scale = 1.0 / static_cast<double>(cfg.fft_size);
  for (std::size_t t = 0; t < s.frames; ++t) {
    fft.inverse(s.frame(t), frame);
    const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(t * cfg.frame_shift) - pad;
    for (std::size_t k = 0; k < cfg.frame_len; ++k) {
      const std::ptrdiff_t i = start + static_cast<std::ptrdiff_t>(k);
      if (i < 0 || i >= n) continue;
      const auto u = static_cast<std::size_t>(i);
      out[u] += frame[k] * scale * window[k];
      norm[u] += window[k] * window[k];
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (norm[i] < 1e-10) {
      throw Error("istft: window overlap vanishes at sample " + std::to_string(i));
    }
    out[i] /= norm[i];
  }
  return Waveform(std::move(out), s.sample_rate);
}

}  // namespace declip::signal
