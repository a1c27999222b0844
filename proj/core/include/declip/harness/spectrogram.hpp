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

#ifndef DECLIP_HARNESS_SPECTROGRAM_HPP_
#define DECLIP_HARNESS_SPECTROGRAM_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include "declip/signal/spectrum_image.hpp"
#include "declip/signal/stft.hpp"

namespace declip::harness {

enum class SpectrogramFormat { kPgm, kCsv };

SpectrogramFormat parse_spectrogram_format(const std::string& name);

// PGM: 8-bit greyscale, min-max scaled, x = frame (time), y = bin with the
// lowest frequency on the bottom row. CSV: '#' header lines, then one line
// per frame holding the raw log-magnitudes of all bins.
void write_spectrogram_pgm(const signal::LogMagMatrix& m, const std::filesystem::path& path);
void write_spectrogram_csv(const signal::LogMagMatrix& m, const std::filesystem::path& path);
signal::LogMagMatrix read_spectrogram_csv(const std::filesystem::path& path);

// Defaults to StftConfig::for_sample_rate of the file.
signal::LogMagMatrix export_spectrogram(const std::filesystem::path& wav,
                                        const std::filesystem::path& out,
                                        SpectrogramFormat format,
                                        const std::optional<signal::StftConfig>& config = {});

}  // namespace declip::harness

#endif  // DECLIP_HARNESS_SPECTROGRAM_HPP_
