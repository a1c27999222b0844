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

#ifndef DECLIP_SIGNAL_SPECTRUM_IMAGE_HPP_
#define DECLIP_SIGNAL_SPECTRUM_IMAGE_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "declip/signal/stft.hpp"

namespace declip::signal {

// Floor on linear magnitude before taking the log.
inline constexpr double kLogFloor = 1e-8;

// Log-magnitude matrix with the highest bin dropped: frames x (bins - 1).
struct LogMagMatrix {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> values;

  double at(std::size_t t, std::size_t f) const { return values[t * bins + f]; }
};

LogMagMatrix log_magnitude(const ComplexSpectrogram& s);

// Square time x frequency spectrum image. Rows are frames, columns bins.
// Rows at or beyond valid_frames are padding.
struct LogMagImage {
  std::size_t size = 0;
  std::vector<double> pixels;
  bool normalized = false;
  double norm_mean = 0.0;
  double norm_std = 1.0;
  std::size_t segment_index = 0;
  std::size_t valid_frames = 0;

  double at(std::size_t row, std::size_t col) const { return pixels[row * size + col]; }
  double& at(std::size_t row, std::size_t col) { return pixels[row * size + col]; }

  friend bool operator==(const LogMagImage&, const LogMagImage&) = default;
};

// Cuts the log-magnitude matrix into consecutive non-overlapping segments of
// (bins - 1) frames; the tail segment is padded with the log floor. With
// normalize set, the utterance-level mean/std over all valid frame-bins is
// removed first and recorded in every image (padding is normalized too).
std::vector<LogMagImage> extract_images(const ComplexSpectrogram& s, bool normalize);

// Inverse of the magnitude path: exponentiates the images' valid rows,
// restores the dropped top bin from the clipped spectrogram, attaches the
// clipped phase and runs istft. Images must be unnormalized and their valid
// rows must cover the spectrogram's frames exactly.
Waveform reconstruct(std::span<const LogMagImage> enhanced, const ComplexSpectrogram& clipped);

// 8-bit binary PGM, min-max scaled, time running left to right and frequency
// bottom to top.
void write_pgm(const LogMagImage& image, const std::filesystem::path& path);

// Raw little-endian float64 pixels plus a JSON sidecar at path + ".json"
// holding dimensions, normalization statistics and valid_frames.
void write_image_binary(const LogMagImage& image, const std::filesystem::path& path);
LogMagImage read_image_binary(const std::filesystem::path& path);

}  // namespace declip::signal

#endif  // DECLIP_SIGNAL_SPECTRUM_IMAGE_HPP_
