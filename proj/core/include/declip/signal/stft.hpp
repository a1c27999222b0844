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

#ifndef DECLIP_SIGNAL_STFT_HPP_
#define DECLIP_SIGNAL_STFT_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "declip/signal/waveform.hpp"

namespace declip::signal {

enum class WindowKind { kHannPeriodic, kRectangular };

struct StftConfig {
  std::size_t frame_len = 512;
  std::size_t frame_shift = 128;
  std::size_t fft_size = 512;
  WindowKind window = WindowKind::kHannPeriodic;

  // 32 ms frames, 8 ms shift, FFT length the next power of two.
  static StftConfig for_sample_rate(int sample_rate);
  // Square-image configuration: fft_size = 2 * image_size so that dropping
  // the top bin leaves image_size bins; 75% overlap.
  static StftConfig for_image_size(std::size_t image_size);

  std::size_t bins() const { return fft_size / 2 + 1; }
  // Leading zero padding so that the first sample sees full overlap.
  std::size_t lead_padding() const { return frame_len - frame_shift; }
  std::size_t frame_count(std::size_t length) const;

  // Throws InvalidArgument unless 0 < frame_shift <= frame_len <= fft_size.
  void validate() const;

  friend bool operator==(const StftConfig&, const StftConfig&) = default;
};

std::vector<double> make_window(WindowKind kind, std::size_t length);

// T x F complex matrix, row-major by frame.
struct ComplexSpectrogram {
  StftConfig config;
  std::size_t frames = 0;
  std::size_t original_length = 0;
  int sample_rate = kDefaultSampleRate;
  std::vector<std::complex<double>> values;

  std::size_t bins() const { return config.bins(); }
  std::span<std::complex<double>> frame(std::size_t t) {
    return {values.data() + t * bins(), bins()};
  }
  std::span<const std::complex<double>> frame(std::size_t t) const {
    return {values.data() + t * bins(), bins()};
  }
  std::complex<double>& at(std::size_t t, std::size_t f) { return values[t * bins() + f]; }
  const std::complex<double>& at(std::size_t t, std::size_t f) const {
    return values[t * bins() + f];
  }
};

// Frame t covers samples [t * shift - lead_padding, ... + frame_len); frames
// continue until every input sample is covered by a full set of overlaps.
ComplexSpectrogram stft(const Waveform& x, const StftConfig& cfg);

// Weighted overlap-add with window-square normalization, truncated to
// original_length. Throws Error where the summed squared window vanishes.
Waveform istft(const ComplexSpectrogram& s);

}  // namespace declip::signal

#endif  // DECLIP_SIGNAL_STFT_HPP_
