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

#ifndef DECLIP_METRICS_ESTOI_HPP_
#define DECLIP_METRICS_ESTOI_HPP_

#include <cstddef>
#include <vector>

#include "declip/signal/waveform.hpp"

namespace declip::metrics {

inline constexpr int kEstoiRate = 10000;
inline constexpr std::size_t kEstoiFrameLen = 256;
inline constexpr std::size_t kEstoiFftSize = 512;
inline constexpr std::size_t kEstoiBands = 15;
inline constexpr double kEstoiMinFreq = 150.0;
inline constexpr std::size_t kEstoiSegment = 30;  // 384 ms
inline constexpr double kEstoiDynamicRange = 40.0;

// One-third-octave grouping of STFT bins at the internal 10 kHz rate.
struct ThirdOctaveBank {
  std::vector<double> center_hz;
  // Half-open bin ranges [first_bin, last_bin) per band.
  std::vector<std::size_t> first_bin;
  std::vector<std::size_t> last_bin;

  static ThirdOctaveBank make(int sample_rate = kEstoiRate, std::size_t fft_size = kEstoiFftSize,
                              std::size_t bands = kEstoiBands, double min_freq = kEstoiMinFreq);
};

// Drops frames of both signals whose clean-frame energy lies more than
// dynamic_range dB below the loudest clean frame, then overlap-adds the
// survivors. Returns {clean, degraded}.
std::pair<std::vector<double>, std::vector<double>> remove_silent_frames(
    const std::vector<double>& clean, const std::vector<double>& degraded,
    double dynamic_range_db, std::size_t frame_len, std::size_t hop);

// Extended short-time objective intelligibility. Throws InsufficientData
// when fewer than 384 ms of active clean speech remain.
double estoi(const signal::Waveform& clean, const signal::Waveform& degraded);

}  // namespace declip::metrics

#endif  // DECLIP_METRICS_ESTOI_HPP_
