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

#include "declip/signal/wav_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "declip/error.hpp"

namespace declip::signal {
namespace {

constexpr double kPcmScale = 32768.0;

std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>((v >> s) & 0xff));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

std::int16_t to_pcm(double v) {
  const double scaled = std::round(v * kPcmScale);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

}  // namespace

double quantize_pcm16(double v) { return to_pcm(v) / kPcmScale; }

Waveform quantize_pcm16(const Waveform& x) {
  std::vector<double> q(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) q[i] = quantize_pcm16(x[i]);
  return x.with_samples(std::move(q));
}

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError(where + "not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      // Some writers leave a bogus data size on streamed output; take what is there.
      if (std::memcmp(chunk, "data", 4) != 0) throw FormatError(where + "truncated chunk");
    }
    const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw FormatError(where + "short fmt chunk");
      std::uint16_t format = le16(chunk + 8);
      channels = le16(chunk + 10);
      rate = le32(chunk + 12);
      bits = le16(chunk + 22);
      if (format == 0xFFFE && avail >= 40) format = le16(chunk + 8 + 24);
      if (format != 1) {
        throw FormatError(where + "unsupported encoding (format tag " +
                          std::to_string(format) + "), need 16-bit PCM");
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = avail;
    }
    pos = body + size + (size & 1u);
  }

  if (!have_fmt) throw FormatError(where + "missing fmt chunk");
  if (data == nullptr) throw FormatError(where + "missing data chunk");
  if (channels != 1) {
    throw FormatError(where + "unsupported channel count " + std::to_string(channels) +
                      " (mono only)");
  }
  if (bits != 16) {
    throw FormatError(where + "unsupported bit depth " + std::to_string(bits));
  }
  if (rate == 0) throw FormatError(where + "zero sample rate");

  std::vector<double> samples(data_size / 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = static_cast<std::int16_t>(le16(data + 2 * i)) / kPcmScale;
  }
  return Waveform(std::move(samples), static_cast<int>(rate));
}

void write_wav(const std::filesystem::path& path, const Waveform& x) {
  const auto data_bytes = static_cast<std::uint32_t>(x.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, 1);  // PCM
  put16(out, 1);  // mono
  put32(out, static_cast<std::uint32_t>(x.sample_rate()));
  put32(out, static_cast<std::uint32_t>(x.sample_rate()) * 2);
  put16(out, 2);
  put16(out, 16);
  put_tag(out, "data");
  put32(out, data_bytes);
  for (double v : x.samples()) put16(out, static_cast<std::uint16_t>(to_pcm(v)));

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed for " + path.string());
}

}  // namespace declip::signal
