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

#include "declip/signal/spectrum_image.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "json.hpp"

#include "declip/error.hpp"

namespace declip::signal {

LogMagMatrix log_magnitude(const ComplexSpectrogram& s) {
  LogMagMatrix m;
  m.frames = s.frames;
  m.bins = s.bins() - 1;
  m.values.resize(m.frames * m.bins);
  for (std::size_t t = 0; t < m.frames; ++t) {
    for (std::size_t f = 0; f < m.bins; ++f) {
      m.values[t * m.bins + f] = std::log(std::max(std::abs(s.at(t, f)), kLogFloor));
    }
  }
  return m;
}

std::vector<LogMagImage> extract_images(const ComplexSpectrogram& s, bool normalize) {
  if (s.frames == 0) throw InvalidArgument("extract_images: spectrogram has no frames");
  LogMagMatrix m = log_magnitude(s);
  const std::size_t side = m.bins;

  double mean = 0.0, stddev = 1.0;
  double pad_value = std::log(kLogFloor);
  if (normalize) {
    double sum = 0.0;
    for (double v : m.values) sum += v;
    mean = sum / static_cast<double>(m.values.size());
    double ss = 0.0;
    for (double v : m.values) ss += (v - mean) * (v - mean);
    stddev = std::sqrt(ss / static_cast<double>(m.values.size()));
    if (!(stddev > 0.0)) stddev = 1.0;  // flat spectrogram; keep the map invertible
    for (double& v : m.values) v = (v - mean) / stddev;
    pad_value = (pad_value - mean) / stddev;
  }

  const std::size_t count = (m.frames + side - 1) / side;
  std::vector<LogMagImage> images(count);
  for (std::size_t seg = 0; seg < count; ++seg) {
    LogMagImage& img = images[seg];
    img.size = side;
    img.pixels.assign(side * side, pad_value);
    img.normalized = normalize;
    img.norm_mean = mean;
    img.norm_std = stddev;
    img.segment_index = seg;
    const std::size_t first = seg * side;
    img.valid_frames = std::min(side, m.frames - first);
    std::copy_n(m.values.begin() + static_cast<std::ptrdiff_t>(first * side),
                img.valid_frames * side, img.pixels.begin());
  }
  return images;
}

Waveform reconstruct(std::span<const LogMagImage> enhanced, const ComplexSpectrogram& clipped) {
  const std::size_t top = clipped.bins() - 1;
  std::size_t covered = 0;
  for (const auto& img : enhanced) {
    if (img.size != top) throw ShapeError("reconstruct: image size does not match bins - 1");
    if (img.normalized) throw InvalidArgument("reconstruct: enhanced images must be unnormalized");
    covered += img.valid_frames;
  }
  if (covered != clipped.frames) {
    throw ShapeError("reconstruct: images cover " + std::to_string(covered) + " frames, need " +
                     std::to_string(clipped.frames));
  }

  ComplexSpectrogram out = clipped;
  std::size_t t = 0;
  for (const auto& img : enhanced) {
    for (std::size_t row = 0; row < img.valid_frames; ++row, ++t) {
      for (std::size_t f = 0; f < top; ++f) {
        const std::complex<double> c = clipped.at(t, f);
        const double mag = std::exp(img.at(row, f));
        const double a = std::abs(c);
        out.at(t, f) = a > 0.0 ? c * (mag / a) : std::complex<double>(mag, 0.0);
      }
      // Top bin keeps the clipped value: same magnitude and phase.
    }
  }
  return istft(out);
}

void write_pgm(const LogMagImage& image, const std::filesystem::path& path) {
  const std::size_t n = image.size;
  const auto [lo_it, hi_it] = std::minmax_element(image.pixels.begin(), image.pixels.end());
  const double lo = *lo_it, span = *hi_it - *lo_it;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f << "P5\n# log-magnitude spectrum image: x = time frame, y = frequency bin (low at bottom)\n"
    << n << ' ' << n << "\n255\n";
  std::vector<unsigned char> raster(n * n);
  for (std::size_t y = 0; y < n; ++y) {
    const std::size_t bin = n - 1 - y;
    for (std::size_t x = 0; x < n; ++x) {
      const double v = span > 0.0 ? (image.at(x, bin) - lo) / span : 0.0;
      raster[y * n + x] = static_cast<unsigned char>(std::lround(255.0 * v));
    }
  }
  f.write(reinterpret_cast<const char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
}

void write_image_binary(const LogMagImage& image, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little, "little-endian host assumed");
  {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    f.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size() * sizeof(double)));
  }
  nlohmann::json meta = {
      {"rows", image.size},
      {"cols", image.size},
      {"dtype", "float64-le"},
      {"layout", "row-major, row = time frame, col = frequency bin"},
      {"normalized", image.normalized},
      {"norm_mean", image.norm_mean},
      {"norm_std", image.norm_std},
      {"segment_index", image.segment_index},
      {"valid_frames", image.valid_frames},
  };
  std::ofstream side(path.string() + ".json", std::ios::trunc);
  if (!side) throw IoError("cannot write sidecar for " + path.string());
  side << meta.dump(2) << '\n';
}

LogMagImage read_image_binary(const std::filesystem::path& path) {
  std::ifstream side(path.string() + ".json");
  if (!side) throw IoError("missing sidecar for " + path.string());
  nlohmann::json meta;
  try {
    side >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ".json: " + e.what());
  }
  LogMagImage img;
  try {
    img.size = meta.at("rows").get<std::size_t>();
    if (meta.at("cols").get<std::size_t>() != img.size) throw FormatError("image is not square");
    img.normalized = meta.at("normalized").get<bool>();
    img.norm_mean = meta.at("norm_mean").get<double>();
    img.norm_std = meta.at("norm_std").get<double>();
    img.segment_index = meta.at("segment_index").get<std::size_t>();
    img.valid_frames = meta.at("valid_frames").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ".json: " + e.what());
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  img.pixels.resize(img.size * img.size);
  f.read(reinterpret_cast<char*>(img.pixels.data()),
         static_cast<std::streamsize>(img.pixels.size() * sizeof(double)));
  if (f.gcount() != static_cast<std::streamsize>(img.pixels.size() * sizeof(double))) {
    throw FormatError(path.string() + ": truncated pixel data");
  }
  return img;
}

}  // namespace declip::signal
