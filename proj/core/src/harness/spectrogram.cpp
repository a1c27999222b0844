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

#include "declip/harness/spectrogram.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "declip/error.hpp"
#include "declip/signal/wav_io.hpp"

namespace declip::harness {

SpectrogramFormat parse_spectrogram_format(const std::string& name) {
  if (name == "pgm") return SpectrogramFormat::kPgm;
  if (name == "csv") return SpectrogramFormat::kCsv;
  throw InvalidArgument("unknown spectrogram format '" + name + "' (pgm, csv)");
}

void write_spectrogram_pgm(const signal::LogMagMatrix& m, const std::filesystem::path& path) {
  if (m.frames == 0 || m.bins == 0) throw InvalidArgument("empty spectrogram");
  const auto [lo, hi] = std::minmax_element(m.values.begin(), m.values.end());
  const double range = *hi - *lo;
  std::vector<unsigned char> px(m.frames * m.bins);
  for (std::size_t f = 0; f < m.bins; ++f) {
    const std::size_t row = m.bins - 1 - f;
    for (std::size_t t = 0; t < m.frames; ++t) {
      const double v = range > 0.0 ? (m.at(t, f) - *lo) / range : 0.0;
      px[row * m.frames + t] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f << "P5\n# log-magnitude spectrogram: x = frame, y = frequency bin (low at bottom)\n"
    << m.frames << ' ' << m.bins << "\n255\n";
  f.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
}

void write_spectrogram_csv(const signal::LogMagMatrix& m, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f << "# log-magnitude spectrogram: one row per frame (time), one column per frequency bin\n"
    << "# frames=" << m.frames << " bins=" << m.bins << '\n';
  char buf[32];
  for (std::size_t t = 0; t < m.frames; ++t) {
    for (std::size_t b = 0; b < m.bins; ++b) {
      const auto res = std::to_chars(buf, buf + sizeof buf, m.at(t, b));
      if (b) f << ',';
      f.write(buf, res.ptr - buf);
    }
    f << '\n';
  }
}

signal::LogMagMatrix read_spectrogram_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  signal::LogMagMatrix m;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::size_t count = 0;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      double v = 0.0;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) throw FormatError("bad number in " + path.string());
      m.values.push_back(v);
      ++count;
      p = res.ptr;
      if (p < end && *p == ',') ++p;
    }
    if (m.frames == 0) m.bins = count;
    if (count != m.bins) throw FormatError("ragged spectrogram CSV " + path.string());
    ++m.frames;
  }
  return m;
}

signal::LogMagMatrix export_spectrogram(const std::filesystem::path& wav,
                                        const std::filesystem::path& out,
                                        SpectrogramFormat format,
                                        const std::optional<signal::StftConfig>& config) {
  const auto x = signal::read_wav(wav);
  const auto cfg = config.value_or(signal::StftConfig::for_sample_rate(x.sample_rate()));
  const auto m = signal::log_magnitude(signal::stft(x, cfg));
  if (format == SpectrogramFormat::kPgm) {
    write_spectrogram_pgm(m, out);
  } else {
    write_spectrogram_csv(m, out);
  }
  return m;
}

}  // namespace declip::harness
